/* LU-factorization checksum over a family of well-conditioned matrices.
 *
 * The factor routine is a textbook column-walking elimination; the strided
 * inner products keep it honest and slow. Diagonally dominant inputs make
 * pivoting unnecessary, so naive and optimized factorizations agree.
 * Prints one checksum line and exits 0.
 */
#include <stdio.h>
#include <stdlib.h>
#include <math.h>

void ludcmp(double *a, int n)
{
    int i, j, k;
    for (j = 0; j < n; j++) {
        for (i = 1; i <= j; i++) {
            double sum = a[i * n + j];
            for (k = 0; k < i; k++) {
                sum -= a[i * n + k] * a[k * n + j];
            }
            a[i * n + j] = sum;
        }
        for (i = j + 1; i < n; i++) {
            double sum = a[i * n + j];
            for (k = 0; k < j; k++) {
                sum -= a[i * n + k] * a[k * n + j];
            }
            a[i * n + j] = sum / a[j * n + j];
        }
    }
}

int main(void)
{
    int n = 256;
    int rounds = 40;
    int r, i, j;
    unsigned long seed = 20240817ul;
    double *a = (double *)malloc((unsigned long)(n * n) * sizeof(double));
    double acc = 0.0;

    for (r = 0; r < rounds; r++) {
        for (i = 0; i < n; i++) {
            for (j = 0; j < n; j++) {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                a[i * n + j] = ((double)(seed >> 40) / 16777216.0 - 0.5) * 2.0;
            }
            a[i * n + i] = (double)n + 4.0 + (double)(i % 7);
        }

        ludcmp(a, n);

        for (i = 0; i < n; i++) {
            for (j = 0; j < n; j++) {
                acc += fabs(a[i * n + j]);
            }
        }
    }
    printf("checksum=%.9e\n",
           acc / ((double)n * (double)n * (double)rounds));
    free(a);
    return 0;
}
