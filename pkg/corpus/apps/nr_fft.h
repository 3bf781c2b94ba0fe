/* Naive single-routine DFT, header-only so apps stay one file.
 * Interface shape: interleaved re/im data, power-of-two length nn, and a
 * direction sign. O(n^2) on purpose; this is the reference CPU library. */
#ifndef NR_FFT_H
#define NR_FFT_H

#include <stdlib.h>
#include <math.h>

void four1(double data[], unsigned long nn, int isign)
{
    unsigned long j, k;
    double *out = (double *)malloc(2ul * nn * sizeof(double));
    double *ctab = (double *)malloc(nn * sizeof(double));
    double *stab = (double *)malloc(nn * sizeof(double));

    /* one table per direction keeps the inner loop free of libm calls */
    for (j = 0; j < nn; j++) {
        double ang = 2.0 * M_PI * (double)j / (double)nn;
        ctab[j] = cos(ang);
        stab[j] = (double)isign * sin(ang);
    }
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
        out[2ul * k] = acc_re;
        out[2ul * k + 1ul] = acc_im;
    }
    for (k = 0; k < 2ul * nn; k++) {
        data[k] = out[k];
    }
    free(out);
    free(ctab);
    free(stab);
}

#endif /* NR_FFT_H */
