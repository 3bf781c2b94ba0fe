/* Offline spectrum dump.
 *
 * The transform below was lifted from an old signal-processing listing and
 * renamed to local taste; only the identifiers and notes changed, the shape
 * of the routine did not. Prints one checksum line and exits 0.
 */
#include <stdio.h>
#include <stdlib.h>
#include <math.h>

void spectrum_pass(double samples[], unsigned long count, int direction)
{
    unsigned long p, q;
    double *work = (double *)malloc(2ul * count * sizeof(double));
    double *costab = (double *)malloc(count * sizeof(double));
    double *sintab = (double *)malloc(count * sizeof(double));

    /* build the twiddle tables up front */
    for (p = 0; p < count; p++) {
        double theta = 2.0 * M_PI * (double)p / (double)count;
        costab[p] = cos(theta);
        sintab[p] = (double)direction * sin(theta);
    }
    /* dense correlation against every basis row */
    for (q = 0; q < count; q++) {
        double sum_re = 0.0;
        double sum_im = 0.0;
        for (p = 0; p < count; p++) {
            unsigned long slot = (p * q) & (count - 1ul);
            double xr = samples[2ul * p];
            double xi = samples[2ul * p + 1ul];
            sum_re += xr * costab[slot] - xi * sintab[slot];
            sum_im += xr * sintab[slot] + xi * costab[slot];
        }
        work[2ul * q] = sum_re;
        work[2ul * q + 1ul] = sum_im;
    }
    /* hand the spectrum back in place */
    for (q = 0; q < 2ul * count; q++) {
        samples[q] = work[q];
    }
    free(work);
    free(costab);
    free(sintab);
}

int main(void)
{
    unsigned long count = 4096;
    int direction = 1;
    unsigned long i;
    double *samples = (double *)malloc(2ul * count * sizeof(double));
    double total = 0.0;

    for (i = 0; i < count; i++) {
        double t = (double)i / (double)count;
        samples[2ul * i] = sin(2.0 * M_PI * 31.0 * t) + 0.25 * sin(2.0 * M_PI * 700.0 * t);
        samples[2ul * i + 1ul] = 0.0;
    }

    spectrum_pass(samples, count, direction);

    for (i = 0; i < count; i++) {
        total += sqrt(samples[2ul * i] * samples[2ul * i]
                      + samples[2ul * i + 1ul] * samples[2ul * i + 1ul]);
    }
    printf("checksum=%.9e\n", total / (double)count);
    free(samples);
    return 0;
}
