/* Spectral checksum of a synthetic tone mix.
 *
 * The transform routine is a deliberately naive O(n^2) DFT with the classic
 * single-routine interface: interleaved re/im data, a power-of-two length
 * and a direction sign. Prints one checksum line and exits 0.
 */
#include <stdio.h>
#include <stdlib.h>
#include <math.h>
#include "nr_fft.h"

int main(void)
{
    unsigned long nn = 16384;
    int isign = 1;
    unsigned long i;
    unsigned long seed = 88172645463325252ul;
    double *data = (double *)malloc(2ul * nn * sizeof(double));
    double acc = 0.0;

    for (i = 0; i < nn; i++) {
        double t = (double)i / (double)nn;
        double v = sin(2.0 * M_PI * 50.0 * t) + 0.5 * sin(2.0 * M_PI * 1200.0 * t);
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        v += ((double)(seed >> 40) / 16777216.0 - 0.5) * 0.25;
        data[2ul * i] = v;
        data[2ul * i + 1ul] = 0.0;
    }

    four1(data, nn, isign);

    for (i = 0; i < nn; i++) {
        acc += sqrt(data[2ul * i] * data[2ul * i]
                    + data[2ul * i + 1ul] * data[2ul * i + 1ul]);
    }
    printf("checksum=%.9e\n", acc / (double)nn);
    free(data);
    return 0;
}
