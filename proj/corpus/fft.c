// Radix-2 FFT on 2^logn points (logn <= 5) in 10-bit fixed point.
int fft(int logn) {
    int ctab[16] = {1024, 1004, 946, 851, 724, 569, 392, 200, 0, -200, -392, -569, -724, -851, -946, -1004};
    int stab[16] = {0, 200, 392, 569, 724, 851, 946, 1004, 1024, 1004, 946, 851, 724, 569, 392, 200};
    int n = 1;
    int i, j, k, m, len, half, tw, idx, wr, wi, ur, ui, vr, vi, t;
    int total = 0;
    for (i = 0; i < logn; i++) {
        n = n * 2;
    }
    int re[n], im[n];
    for (i = 0; i < n; i++) {
        re[i] = i * 37 % 11 - 5;
        im[i] = 0;
    }
    j = 0;
    for (i = 1; i < n; i++) {
        m = n / 2;
        while (m >= 1 && j >= m) {
            j = j - m;
            m = m / 2;
        }
        j = j + m;
        if (i < j) {
            t = re[i];
            re[i] = re[j];
            re[j] = t;
            t = im[i];
            im[i] = im[j];
            im[j] = t;
        }
    }
    for (len = 2; len <= n; len = len * 2) {
        half = len / 2;
        tw = 32 / len;
        for (i = 0; i < n; i = i + len) {
            for (k = 0; k < half; k++) {
                idx = k * tw;
                wr = ctab[idx];
                wi = stab[idx];
                ur = re[i + k];
                ui = im[i + k];
                vr = (re[i + k + half] * wr + im[i + k + half] * wi) / 1024;
                vi = (im[i + k + half] * wr - re[i + k + half] * wi) / 1024;
                re[i + k] = ur + vr;
                im[i + k] = ui + vi;
                re[i + k + half] = ur - vr;
                im[i + k + half] = ui - vi;
            }
        }
    }
    for (i = 0; i < n; i++) {
        total = total + re[i] * re[i] + im[i] * im[i];
    }
    return total;
}
