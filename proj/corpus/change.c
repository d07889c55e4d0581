// Ways to make n cents from quarters, dimes, nickels and pennies.
// Almost all work is scalar; only the result goes through memory.
int change(int n) {
    int ways = 0;
    int q, d, k;
    int result[2];
    for (q = 0; q * 25 <= n; q++) {
        for (d = 0; q * 25 + d * 10 <= n; d++) {
            for (k = 0; q * 25 + d * 10 + k * 5 <= n; k++) {
                ways = ways + 1;
            }
        }
    }
    result[0] = ways;
    result[1] = n;
    return result[0];
}
