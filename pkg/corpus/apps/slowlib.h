/* Deliberately slower stand-in: correct output, wasted work.
 * Exists to prove that selection falls back to the all-CPU baseline when an
 * "accelerated" replacement does not actually accelerate anything. */
#ifndef SLOWLIB_H
#define SLOWLIB_H

#include <stdlib.h>
#include <math.h>

static inline void slowlib_fft(double data[], unsigned long nn, int isign)
{
    unsigned long j, k, pass;
    double *out = (double *)malloc(2ul * nn * sizeof(double));
    double *ctab = (double *)malloc(nn * sizeof(double));
    double *stab = (double *)malloc(nn * sizeof(double));
    volatile double sink = 0.0;

    for (j = 0; j < nn; j++) {
        double ang = 2.0 * M_PI * (double)j / (double)nn;
        ctab[j] = cos(ang);
        stab[j] = (double)isign * sin(ang);
    }
    /* two full naive passes; the first only feeds the volatile sink */
    for (pass = 0; pass < 2ul; pass++) {
        for (k = 0; k < nn; k++) {
            double acc_re = 0.0;
            double acc_im = 0.0;
            for (j = 0; j < nn; j++) {
                unsigned long idx = (j * k) & (nn - 1ul);
                double re = data[2ul * j];
                double im = data[2ul * j + 1ul];
                acc_re += re * ctab[idx] - im * stab[idx];
                acc_im += re * stab[idx] + im * ctab[idx];
            }
            if (pass == 0ul) {
                sink += acc_re + acc_im;
            } else {
                out[2ul * k] = acc_re;
                out[2ul * k + 1ul] = acc_im;
            }
        }
    }
    (void)sink;
    for (k = 0; k < 2ul * nn; k++) {
        data[k] = out[k];
    }
    free(out);
    free(ctab);
    free(stab);
}

#endif /* SLOWLIB_H */
