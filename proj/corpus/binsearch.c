int binsearch(int n, int a[n]) {
    int q, lo, hi, mid, found = 0;
    for (q = 0; q < n; q++) {
        lo = 0;
        hi = n - 1;
        while (lo <= hi) {
            mid = (lo + hi) / 2;
            if (a[mid] == q * 2) {
                found++;
                lo = hi + 1;
            } else if (a[mid] < q * 2) {
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
    }
    return found;
}
