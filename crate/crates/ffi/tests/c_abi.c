#include "etnckit.h"
#include <stdio.h>
#include <string.h>

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s\n", __LINE__, #cond); return 1; } } while (0)

int main(void) {
    CHECK(etnckit_check_count() == 11);

    EtnckitCyclotomic *z = NULL, *zz = NULL, *w = NULL;
    CHECK(etnckit_cyclotomic_root_of_unity(4, 1, &z) == ETNCKIT_ERROR_OK);
    CHECK(etnckit_cyclotomic_mul(z, z, &zz) == ETNCKIT_ERROR_OK);
    double re = 0, im = 0;
    CHECK(etnckit_cyclotomic_to_complex(zz, &re, &im) == ETNCKIT_ERROR_OK);
    CHECK(re == -1.0);
    CHECK(etnckit_cyclotomic_from_json("{\"order\": 1, \"coeffs\": [\"0\"]}", &w) == ETNCKIT_ERROR_OK);
    EtnckitCyclotomic *q = NULL;
    CHECK(etnckit_cyclotomic_div(z, w, &q) == ETNCKIT_ERROR_ARITHMETIC);
    CHECK(q == NULL && etnckit_last_error() != NULL);

    EtnckitSpec *spec = NULL;
    CHECK(etnckit_spec_parse("{\"jobs\": [{\"check\": \"gauss\", \"params\": {\"moduli\": [5, 7]}, \"seed\": 2}]}", false, &spec) == ETNCKIT_ERROR_OK);
    EtnckitRun *run = NULL;
    CHECK(etnckit_run(spec, 0, false, 0, &run) == ETNCKIT_ERROR_OK);
    EtnckitStatus status;
    CHECK(etnckit_run_status(run, 0, &status) == ETNCKIT_ERROR_OK && status == ETNCKIT_STATUS_PASS);
    CHECK(etnckit_run_status(run, 1, &status) == ETNCKIT_ERROR_OUT_OF_RANGE);
    char *json = NULL;
    CHECK(etnckit_run_report_json(run, 0, &json) == ETNCKIT_ERROR_OK);
    CHECK(strstr(json, "\"status\": \"pass\"") != NULL);
    etnckit_string_free(json);

    EtnckitSpec *bad = NULL;
    CHECK(etnckit_spec_parse("{\"jobs\": [", false, &bad) == ETNCKIT_ERROR_PARSE);

    etnckit_run_free(run);
    etnckit_spec_free(spec);
    etnckit_cyclotomic_free(z);
    etnckit_cyclotomic_free(zz);
    etnckit_cyclotomic_free(w);
    etnckit_cyclotomic_free(NULL);
    puts("ok");
    return 0;
}
