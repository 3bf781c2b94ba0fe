/* Optimized drop-in transforms standing in for accelerator libraries.
 * Header-only so the replacement needs no extra link step. */
#ifndef FASTLIB_H
#define FASTLIB_H

#include <math.h>

/* In-place radix-2 FFT; same interface and sign convention as the naive
 * O(n^2) transform it replaces. nn must be a power of two. */
static inline void fastlib_fft(double data[], unsigned long nn, int isign)
{
    unsigned long i, j, k, len;

    j = 0;
    for (i = 1; i < nn; i++) {
        unsigned long bit = nn >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            double tr = data[2ul * i];
            double ti = data[2ul * i + 1ul];
            data[2ul * i] = data[2ul * j];
            data[2ul * i + 1ul] = data[2ul * j + 1ul];
            data[2ul * j] = tr;
            data[2ul * j + 1ul] = ti;
        }
    }

    for (len = 2; len <= nn; len <<= 1) {
        double ang = (double)isign * 2.0 * M_PI / (double)len;
        double wr = cos(ang);
        double wi = sin(ang);
        for (i = 0; i < nn; i += len) {
            double cr = 1.0;
            double ci = 0.0;
            for (k = 0; k < len / 2; k++) {
                unsigned long a = 2ul * (i + k);
                unsigned long b = 2ul * (i + k + len / 2);
                double xr = data[b] * cr - data[b + 1ul] * ci;
                double xi = data[b] * ci + data[b + 1ul] * cr;
                double nr;
                data[b] = data[a] - xr;
                data[b + 1ul] = data[a + 1ul] - xi;
                data[a] += xr;
                data[a + 1ul] += xi;
                nr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = nr;
            }
        }
    }
}

/* Blocked LU without pivoting (callers guarantee diagonal dominance).
 * Classic panel/update split: factor the diagonal block while it is hot,
 * finish the block rows and the multiplier columns row-locally, then spend
 * almost all flops in a 2x4 register-blocked trailing update. */
static inline void fastlib_lu(double *a, int n)
{
    const int nb = 16;
    double inv[16];
    int kk, k, i, j, t;

    for (kk = 0; kk < n; kk += nb) {
        int kend = kk + nb < n ? kk + nb : n;

        /* factor the nb x nb diagonal block in place */
        for (k = kk; k < kend; k++) {
            double d = 1.0 / a[k * n + k];
            inv[k - kk] = d;
            for (i = k + 1; i < kend; i++) {
                const double *restrict uk = &a[k * n];
                double *restrict ai = &a[i * n];
                double lik = ai[k] * d;
                ai[k] = lik;
                for (j = k + 1; j < kend; j++) {
                    ai[j] -= lik * uk[j];
                }
            }
        }

        /* finish the block rows to the right of the block */
        for (i = kk + 1; i < kend; i++) {
            double *restrict ai = &a[i * n];
            for (j = kend; j + 4 <= n; j += 4) {
                double c0 = ai[j];
                double c1 = ai[j + 1];
                double c2 = ai[j + 2];
                double c3 = ai[j + 3];
                for (t = kk; t < i; t++) {
                    const double *restrict ut = &a[t * n];
                    double lit = ai[t];
                    c0 -= lit * ut[j];
                    c1 -= lit * ut[j + 1];
                    c2 -= lit * ut[j + 2];
                    c3 -= lit * ut[j + 3];
                }
                ai[j] = c0;
                ai[j + 1] = c1;
                ai[j + 2] = c2;
                ai[j + 3] = c3;
            }
            for (; j < n; j++) {
                double c = ai[j];
                for (t = kk; t < i; t++) {
                    c -= ai[t] * a[t * n + j];
                }
                ai[j] = c;
            }
        }

        /* multipliers below the block, two rows at a time */
        for (i = kend; i + 2 <= n; i += 2) {
            double *restrict ai0 = &a[i * n];
            double *restrict ai1 = &a[(i + 1) * n];
            for (k = kk; k < kend; k++) {
                double c0 = ai0[k];
                double c1 = ai1[k];
                for (t = kk; t < k; t++) {
                    double utk = a[t * n + k];
                    c0 -= ai0[t] * utk;
                    c1 -= ai1[t] * utk;
                }
                ai0[k] = c0 * inv[k - kk];
                ai1[k] = c1 * inv[k - kk];
            }
        }
        for (; i < n; i++) {
            double *restrict ai = &a[i * n];
            for (k = kk; k < kend; k++) {
                double c = ai[k];
                for (t = kk; t < k; t++) {
                    c -= ai[t] * a[t * n + k];
                }
                ai[k] = c * inv[k - kk];
            }
        }

        /* trailing update: A22 -= L21 * U12, 2x4 register blocking */
        for (i = kend; i + 2 <= n; i += 2) {
            double *restrict ai0 = &a[i * n];
            double *restrict ai1 = &a[(i + 1) * n];
            for (j = kend; j + 4 <= n; j += 4) {
                double c00 = ai0[j];
                double c01 = ai0[j + 1];
                double c02 = ai0[j + 2];
                double c03 = ai0[j + 3];
                double c10 = ai1[j];
                double c11 = ai1[j + 1];
                double c12 = ai1[j + 2];
                double c13 = ai1[j + 3];
                for (k = kk; k < kend; k++) {
                    const double *restrict uk = &a[k * n];
                    double l0 = ai0[k];
                    double l1 = ai1[k];
                    double u0 = uk[j];
                    double u1 = uk[j + 1];
                    double u2 = uk[j + 2];
                    double u3 = uk[j + 3];
                    c00 -= l0 * u0;
                    c01 -= l0 * u1;
                    c02 -= l0 * u2;
                    c03 -= l0 * u3;
                    c10 -= l1 * u0;
                    c11 -= l1 * u1;
                    c12 -= l1 * u2;
                    c13 -= l1 * u3;
                }
                ai0[j] = c00;
                ai0[j + 1] = c01;
                ai0[j + 2] = c02;
                ai0[j + 3] = c03;
                ai1[j] = c10;
                ai1[j + 1] = c11;
                ai1[j + 2] = c12;
                ai1[j + 3] = c13;
            }
            for (; j < n; j++) {
                double c0 = ai0[j];
                double c1 = ai1[j];
                for (k = kk; k < kend; k++) {
                    double ukj = a[k * n + j];
                    c0 -= ai0[k] * ukj;
                    c1 -= ai1[k] * ukj;
                }
                ai0[j] = c0;
                ai1[j] = c1;
            }
        }
        for (; i < n; i++) {
            double *restrict ai = &a[i * n];
            for (j = kend; j < n; j++) {
                double c = ai[j];
                for (k = kk; k < kend; k++) {
                    c -= ai[k] * a[k * n + j];
                }
                ai[j] = c;
            }
        }
    }
}

#endif /* FASTLIB_H */
