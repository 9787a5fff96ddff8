/* Compiles the public header as C and drives a few calls. */
#include <stdio.h>

#include "mpscap/mpscap.h"

int main(void) {
  mpscap_model* m = NULL;
  double c = 0.0;
  if (mpscap_model_mg(0.5, &m) != MPSCAP_OK) return 1;
  if (mpscap_closed_form_capacity(m, &c) != MPSCAP_OK) return 1;
  mpscap_model_free(m);
  if (c < 0.5 - 1e-12 || c > 0.5 + 1e-12) return 1;
  if (mpscap_model_mg(2.0, &m) != MPSCAP_DOMAIN) return 1;
  printf("%s\n", mpscap_last_error());
  return 0;
}
