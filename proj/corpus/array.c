#include <stdio.h>

int array(int n) {
    int a[n];
    int i, s = 0;
    for (i = 0; i < n; i++) {
        a[i] = i * 3 % 7;
    }
    for (i = 0; i < n; i++) {
        s = s + a[i];
    }
    return s;
}
