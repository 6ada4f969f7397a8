/* Compiled as C to keep the public header C-clean. */
#include "tcs/tcs.h"

#include <stdio.h>

int main(void) {
    tcs_graph* g = NULL;
    tcs_status s = tcs_graph_from_json("{\"n_vars\": 2, \"max_lag\": 1, \"edges\": [[1, 0, 1]]}", &g);
    if (s != TCS_OK) {
        fprintf(stderr, "%s\n", tcs_last_error());
        return 1;
    }
    size_t e = tcs_graph_edge_count(g);
    tcs_graph_free(g);
    return e == 1 ? 0 : 1;
}
