/* Median-sampling checksum over a sorted pseudo-random buffer.
 *
 * Structurally unrelated to any registered block: serves as the negative
 * control for similarity matching and as a pile of unregistered calls for
 * the name matcher to ignore. Prints one checksum line and exits 0.
 */
#include <stdio.h>
#include <stdlib.h>

static void swap_items(double *a, long i, long j)
{
    double t = a[i];
    a[i] = a[j];
    a[j] = t;
}

static long partition_range(double *a, long lo, long hi)
{
    double pivot = a[hi];
    long store = lo - 1;
    long i;
    for (i = lo; i < hi; i++) {
        if (a[i] <= pivot) {
            store = store + 1;
            swap_items(a, store, i);
        }
    }
    swap_items(a, store + 1, hi);
    return store + 1;
}

static void sort_range(double *a, long lo, long hi)
{
    if (lo < hi) {
        long mid = partition_range(a, lo, hi);
        sort_range(a, lo, mid - 1);
        sort_range(a, mid + 1, hi);
    }
}

int main(void)
{
    long n = 200000;
    long i;
    unsigned long seed = 424242ul;
    double *buf = (double *)malloc((unsigned long)n * sizeof(double));
    double acc = 0.0;

    for (i = 0; i < n; i++) {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        buf[i] = (double)(seed >> 40) / 16777216.0;
    }

    sort_range(buf, 0, n - 1);

    for (i = 0; i < n; i += n / 16) {
        acc += buf[i];
    }
    printf("checksum=%.9e\n", acc);
    free(buf);
    return 0;
}
