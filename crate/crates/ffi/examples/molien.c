#include <stdio.h>
#include "invlc.h"

int main(void) {
    const int64_t rotation[] = {0, -1, 1, 0};
    InvlcGroup *g = NULL;
    if (invlc_group_new(0, 2, rotation, 1, 0, &g) != INVLC_STATUS_OK) {
        fprintf(stderr, "%s\n", invlc_last_error());
        return 1;
    }
    size_t order = 0;
    uint64_t series[9];
    invlc_group_order(g, &order);
    invlc_molien(g, 8, series, 9);
    printf("order %zu, Molien:", order);
    for (int d = 0; d <= 8; d++) printf(" %llu", (unsigned long long)series[d]);
    printf("\n");

    InvlcPieceSummary piece;
    InvlcStatus s = invlc_lc_piece(0, 2, "x", NULL, 1, 0, 12, 3, &piece);
    printf("H^1_(x)(K[x,y])_0: %s\n", s == INVLC_STATUS_NOT_STABILIZED ? "not stabilized" : "stabilized");
    invlc_group_free(g);
    return 0;
}
