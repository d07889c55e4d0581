void shell(int n, int a[n]) {
    int gap, i, j, t;
    for (gap = n / 2; gap > 0; gap = gap / 2) {
        for (i = gap; i < n; i++) {
            t = a[i];
            j = i;
            while (j >= gap && a[j - gap] > t) {
                a[j] = a[j - gap];
                j = j - gap;
            }
            a[j] = t;
        }
    }
}
