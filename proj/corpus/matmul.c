int matmul(int n) {
    int a[n * n], b[n * n], c[n * n];
    int i, j, k, s;
    int trace = 0;
    for (i = 0; i < n; i++) {
        for (j = 0; j < n; j++) {
            a[i * n + j] = i + j;
            b[i * n + j] = i - j;
        }
    }
    for (i = 0; i < n; i++) {
        for (j = 0; j < n; j++) {
            s = 0;
            for (k = 0; k < n; k++) {
                s = s + a[i * n + k] * b[k * n + j];
            }
            c[i * n + j] = s;
        }
    }
    for (i = 0; i < n; i++) {
        trace = trace + c[i * n + i];
    }
    return trace;
}
