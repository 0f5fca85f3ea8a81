#include <stdio.h>
#include "modcalc.h"

int main(void) {
    ModcalcSeries *s = NULL;
    if (modcalc_eval("Serre(E10,1)", 5, &s) != MODCALC_STATUS_OK) {
        fprintf(stderr, "%s\n", modcalc_last_error());
        return 1;
    }
    for (size_t n = 0; n < modcalc_series_prec(s); n++) {
        char *c = NULL;
        modcalc_series_coeff(s, n, &c);
        printf("q^%zu: %s\n", n, c);
        modcalc_string_free(c);
    }
    modcalc_series_free(s);
    return 0;
}
