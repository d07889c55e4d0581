// Branch from the weighted-average example; run pathex with
// --assume "x > 20 && x <= 100".
void snippet(int x) {
    x = x - 10;
    if (x > 30) {
        x = x * 2;
    } else {
        x = x + 1;
    }
}
