/* C interface to the test-element library.
 *
 * Objects are opaque handles released with their *_destroy function.
 * Every call returns a tel_status; on failure tel_last_error() holds a
 * message for the calling thread. Strings handed out through char** are
 * owned by the caller and released with tel_string_free. Structured
 * results are JSON documents.
 */
#ifndef TESTEL_TESTEL_H
#define TESTEL_TESTEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TEL_API __declspec(dllexport)
#else
#define TEL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tel_status {
  TEL_OK = 0,
  TEL_ERR_INVALID_ARGUMENT = 1,
  TEL_ERR_PARSE = 2,
  TEL_ERR_RANK_MISMATCH = 3,
  TEL_ERR_OUT_OF_RANGE = 4,
  TEL_ERR_DOMAIN = 5,
  TEL_ERR_RESOURCE_LIMIT = 6,
  TEL_ERR_INVARIANT = 7,
  TEL_ERR_IO = 8,
  TEL_ERR_INTERNAL = 9
} tel_status;

typedef struct tel_group tel_group;
typedef struct tel_word tel_word;
typedef struct tel_graph tel_graph;

TEL_API const char* tel_version(void);
TEL_API const char* tel_status_name(tel_status status);
/* Message of the last failed call on this thread, "" if none. */
TEL_API const char* tel_last_error(void);
TEL_API void tel_string_free(char* s);

/* ---- groups ---- */

/* "free:<rank>", "orientable:<genus>", "nonorientable:<genus>". */
TEL_API tel_status tel_group_parse(const char* spec, tel_group** out);
TEL_API void tel_group_destroy(tel_group* group);
TEL_API int tel_group_rank(const tel_group* group);
TEL_API tel_status tel_group_describe(const tel_group* group, char** out);

/* ---- words ---- */

/* Whitespace-separated tokens x<i>, x<i>^-1 or x<i>^k; "1" or "" is the identity. */
TEL_API tel_status tel_word_parse(const char* text, int rank, tel_word** out);
TEL_API void tel_word_destroy(tel_word* word);
TEL_API tel_status tel_word_to_string(const tel_word* word, char** out);
TEL_API size_t tel_word_length(const tel_word* word);
TEL_API tel_status tel_word_multiply(const tel_word* a, const tel_word* b, tel_word** out);
TEL_API tel_status tel_word_invert(const tel_word* a, tel_word** out);

/* ---- subgroup graphs ---- */

TEL_API tel_status tel_graph_build(int rank, const tel_word* const* generators, size_t count,
                                   tel_graph** out);
TEL_API void tel_graph_destroy(tel_graph* graph);
TEL_API tel_status tel_graph_contains(const tel_graph* graph, const tel_word* word, int* out);
/* Index of the subgroup, or -1 when it is infinite. */
TEL_API tel_status tel_graph_index(const tel_graph* graph, int64_t* out);
TEL_API tel_status tel_graph_serialize(const tel_graph* graph, char** out);
/* Schreier transversal and generators of a finite-index subgroup. */
TEL_API tel_status tel_graph_schreier_json(const tel_graph* graph, char** out_json);

/* ---- operations with JSON results ---- */

/* Free reduction; for surface groups also the Dehn-reduced form and the
 * word-problem verdict. */
TEL_API tel_status tel_reduce_json(const tel_group* group, const char* word, char** out_json);

/* Ball and sphere sizes; with enumerate != 0 the counts are checked
 * against an exhaustive enumeration. */
TEL_API tel_status tel_ball_json(int rank, int radius, int enumerate, char** out_json);
/* Writes the sphere, one word per line, to path. */
TEL_API tel_status tel_sphere_write(int rank, int radius, const char* path, char** out_json);
TEL_API tel_status tel_sphere_sample_json(int rank, int radius, uint64_t seed, size_t count,
                                          char** out_json);

/* Frattini-layer membership and adjustment of a word at prime p. */
TEL_API tel_status tel_frattini_json(const tel_group* group, const char* word, int p, size_t max_cosets,
                                     char** out_json);

typedef struct tel_net_options {
  int vetting_bound;        /* < 0 picks the per-group default */
  size_t max_cosets;
  uint64_t max_endomorphisms;
} tel_net_options;

TEL_API tel_net_options tel_net_options_default(void);
TEL_API tel_status tel_net_json(const tel_group* group, const char* word, const tel_net_options* options,
                                char** out_json);

/* images[i] is the cycle notation of the image of x_{i+1} on 1..degree. */
TEL_API tel_status tel_coset_json(const tel_group* group, const char* word, size_t degree,
                                  const char* const* images, size_t image_count,
                                  const tel_net_options* options, char** out_json);

TEL_API tel_status tel_endo_json(const tel_group* group, const char* word, int bound,
                                 uint64_t max_endomorphisms, char** out_json);

typedef struct tel_census_options {
  int vetting_bound;
  uint64_t seed;
  unsigned workers;
  uint64_t max_elements;
  uint64_t max_endomorphisms;
  const char* log_path; /* NULL: no persistence */
  const char* csv_path; /* NULL: no CSV export */
} tel_census_options;

TEL_API tel_census_options tel_census_options_default(void);
TEL_API tel_status tel_census_json(int rank, int radius, int search_bound, const tel_census_options* options,
                                   char** out_json);

TEL_API tel_status tel_bound_json(const char* name, int n, size_t max_exact_digits, char** out_json);

/* subset: all, identity, even, turner, frattini:<p>. */
TEL_API tel_status tel_verify_chain_json(int rank, int radius, const char* subset, const char* const* translates,
                                         size_t translate_count, char** out_json);
TEL_API tel_status tel_verify_audit_json(int rank, int radius, int vetting_bound, unsigned workers,
                                         char** out_json);
TEL_API tel_status tel_verify_schreier_json(const tel_group* group, int p, size_t max_cosets, char** out_json);
TEL_API tel_status tel_verify_ball_json(int rank, int radius, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* TESTEL_TESTEL_H */
