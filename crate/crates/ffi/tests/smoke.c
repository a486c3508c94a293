#include <stdio.h>
#include <string.h>
#include "transverse.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, tv_last_error()); return 1; } } while (0)

int main(void) {
    TvCubeMap *g = NULL, *psi = NULL, *phi = NULL, *back = NULL;
    CHECK(tv_map_parse("2>2:0,1,1,3", &g) == TV_STATUS_OK);
    int64_t num[2] = {1, 2}, den[2] = {3, 3}, on[2], od[2];
    CHECK(tv_map_eval(g, num, den, 2, on, od, 2) == TV_STATUS_OK);
    CHECK(on[0] == 2 && od[0] == 3 && on[1] == 1 && od[1] == 3);

    TvCubeMap *f = NULL;
    CHECK(tv_map_parse("2>3:0,2,2,6", &f) == TV_STATUS_OK);
    CHECK(tv_map_factorize(f, &psi, &phi) == TV_STATUS_OK);
    CHECK(tv_map_compose(phi, psi, &back) == TV_STATUS_OK);
    char *lit = NULL;
    CHECK(tv_map_to_literal(back, &lit) == TV_STATUS_OK);
    CHECK(strcmp(lit, "2>3:0,2,2,6") == 0);
    tv_string_free(lit);

    uint64_t count = 0;
    CHECK(tv_count_homset(3, 3, &count) == TV_STATUS_OK && count == 66);

    TvCubeMap *bad = NULL;
    CHECK(tv_map_parse("2>2:0,3,3,3", &bad) == TV_STATUS_NOT_COTRANSVERSE);
    CHECK(strlen(tv_last_error()) > 0);

    tv_map_free(g);
    tv_map_free(f);
    tv_map_free(psi);
    tv_map_free(phi);
    tv_map_free(back);
    puts("ok");
    return 0;
}
