#ifndef AMORPH_H
#define AMORPH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define AMORPH_API __declspec(dllexport)
#else
#define AMORPH_API __attribute__((visibility("default")))
#endif

typedef struct amorph_scheme amorph_scheme;

typedef enum amorph_status {
    AMORPH_OK = 0,
    AMORPH_E_ARGUMENT = 1,     /* null pointer, bad partition, bad generator parameters */
    AMORPH_E_PARSE = 2,        /* malformed text */
    AMORPH_E_IO = 3,           /* file cannot be read or written */
    AMORPH_E_INVALID = 4,      /* not a symmetric association scheme / eigenmatrix */
    AMORPH_E_UNSUPPORTED = 5,  /* non-integral spectrum, too many classes */
    AMORPH_E_NO_FUSION = 6,    /* partition does not give a fusion scheme */
    AMORPH_E_VIOLATION = 7,    /* a checked property failed */
    AMORPH_E_INTERNAL = 8
} amorph_status;

/* Message of the last failure on the calling thread ("Kind: detail"), or "". */
AMORPH_API const char* amorph_last_error(void);
AMORPH_API const char* amorph_status_name(amorph_status status);

/* Strings returned through char** are owned by the caller. */
AMORPH_API void amorph_string_free(char* s);

/* Files ending in .eigen hold a first eigenmatrix; anything else a relation table. */
AMORPH_API amorph_status amorph_scheme_load(const char* path, amorph_scheme** out);
AMORPH_API amorph_status amorph_scheme_parse(const char* text, int is_eigen, amorph_scheme** out);
AMORPH_API void amorph_scheme_free(amorph_scheme* s);

AMORPH_API amorph_status amorph_scheme_info(const amorph_scheme* s, size_t* v, size_t* d, int* has_table);
/* Table text when the scheme has a table, eigenmatrix text otherwise. */
AMORPH_API amorph_status amorph_scheme_to_text(const amorph_scheme* s, char** out);
AMORPH_API amorph_status amorph_scheme_write(const amorph_scheme* s, const char* path);

/* kind: "complete" (n), "wreath" (m; inner required), "chain" (n1..nr),
   "latin" (n, t), "johnson3" (n). */
AMORPH_API amorph_status amorph_generate(const char* kind, const size_t* params, size_t nparams,
                                         const amorph_scheme* inner, amorph_scheme** out);

/* parts uses "1,2|3" syntax. */
AMORPH_API amorph_status amorph_fuse(const amorph_scheme* s, const char* parts, amorph_scheme** out, char** summary);

AMORPH_API amorph_status amorph_validate_text(const amorph_scheme* s, char** out);
AMORPH_API amorph_status amorph_spectrum_text(const amorph_scheme* s, int json, char** out);
AMORPH_API amorph_status amorph_pairs_text(const amorph_scheme* s, int dual, char** out);
AMORPH_API amorph_status amorph_graph_text(const amorph_scheme* s, int idempotents, char** out);
AMORPH_API amorph_status amorph_graph_dot(const amorph_scheme* s, int idempotents, char** out);
/* *is_amorphic receives the verdict; AMORPH_E_VIOLATION if the deciders disagree. */
AMORPH_API amorph_status amorph_amorphic_text(const amorph_scheme* s, int oracle, char** out, int* is_amorphic);
AMORPH_API amorph_status amorph_classify_text(const amorph_scheme* s, char** out);

/* Default catalog plus catalog_dir (may be NULL). workers = 0 uses every core.
   Returns AMORPH_E_VIOLATION when the report records violations. */
AMORPH_API amorph_status amorph_verify_paper(const char* catalog_dir, unsigned workers, char** report_json,
                                             char** summary, size_t* violations);

#ifdef __cplusplus
}
#endif

#endif
