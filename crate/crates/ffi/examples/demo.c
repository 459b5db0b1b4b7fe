// cc -Iinclude examples/demo.c ../../target/release/libhypmaass_ffi.a -lpthread -ldl -lm
#include <stdio.h>

#include "hypmaass.h"

int main(void) {
    HmSeries *h = NULL;
    if (hm_series_new(6, 5, 1e-10, &h) != HM_STATUS_OK) {
        fprintf(stderr, "%s\n", hm_last_error_message());
        return 1;
    }
    HmValue v;
    HmStatus s = hm_series_eval(h, HM_TARGET_OMEGA, 0.1, 1.2, &v);
    if (s == HM_STATUS_OK) {
        printf("omega = %.15e %+.15ei (error <= %.1e)\n", v.re, v.im, v.error_bound);
    } else {
        fprintf(stderr, "%s\n", hm_last_error_message());
    }
    hm_series_free(h);
    return s == HM_STATUS_OK ? 0 : 1;
}
