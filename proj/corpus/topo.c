// Kahn's algorithm on a fixed DAG: edge i -> j (i < j) when (7i + 3j) % 5 == 0.
int topo(int n) {
    int adj[n * n], indeg[n], queue[n], order[n];
    int i, j, u, head = 0, tail = 0, count = 0;
    for (i = 0; i < n; i++) {
        indeg[i] = 0;
        for (j = 0; j < n; j++) {
            adj[i * n + j] = 0;
        }
    }
    for (i = 0; i < n; i++) {
        for (j = i + 1; j < n; j++) {
            if ((i * 7 + j * 3) % 5 == 0) {
                adj[i * n + j] = 1;
                indeg[j] = indeg[j] + 1;
            }
        }
    }
    for (i = 0; i < n; i++) {
        if (indeg[i] == 0) {
            queue[tail] = i;
            tail++;
        }
    }
    while (head < tail) {
        u = queue[head];
        head++;
        order[count] = u;
        count++;
        for (j = 0; j < n; j++) {
            if (adj[u * n + j]) {
                indeg[j]--;
                if (indeg[j] == 0) {
                    queue[tail] = j;
                    tail++;
                }
            }
        }
    }
    return count;
}
