#ifndef HOMGROUP_H
#define HOMGROUP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HgStatus {
  HG_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  HG_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HG_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed key, ciphertext, circuit or program text.
   */
  HG_STATUS_PARSE = 3,
  /**
   * Key generation, encryption or decryption failed.
   */
  HG_STATUS_CRYPTO = 4,
  /**
   * Unknown group or element, or mismatched groups.
   */
  HG_STATUS_GROUP = 5,
  /**
   * Circuit evaluation or compilation failed.
   */
  HG_STATUS_CIRCUIT = 6,
  /**
   * The operation needs a secret key the handle does not hold.
   */
  HG_STATUS_MISSING_SECRET = 7,
  /**
   * Internal error; the library caught a panic.
   */
  HG_STATUS_PANIC = 8,
} HgStatus;

/**
 * A parsed boolean circuit.
 */
typedef struct HgCircuit HgCircuit;

/**
 * A public key, optionally with its secret half.
 */
typedef struct HgKeyPair HgKeyPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *hg_last_error(void);

/**
 * Library version as a static string.
 */
const char *hg_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void hg_string_free(char *s);

/**
 * Generates a key pair. `group` is `z<m>` for the cyclic system or a builtin
 * name such as `sym3`, `sym5`, `alt5`.
 *
 * # Safety
 * `group` must be a valid string and `out` writable.
 */
enum HgStatus hg_keypair_generate(const char *group,
                                  uint32_t bits,
                                  uint64_t seed,
                                  struct HgKeyPair **out);

/**
 * Loads a key pair from its text encodings. `secret_text` may be NULL for a
 * public-only handle.
 *
 * # Safety
 * `public_text` must be a valid string, `secret_text` NULL or a valid string,
 * and `out` writable.
 */
enum HgStatus hg_keypair_from_text(const char *public_text,
                                   const char *secret_text,
                                   struct HgKeyPair **out);

/**
 * # Safety
 * `kp` must be NULL or a handle from this library that has not been freed.
 */
void hg_keypair_free(struct HgKeyPair *kp);

/**
 * Nonzero if the handle holds a secret key.
 *
 * # Safety
 * `kp` must be NULL or a live handle.
 */
uint8_t hg_keypair_has_secret(const struct HgKeyPair *kp);

/**
 * # Safety
 * `kp` must be a live handle and `out` writable.
 */
enum HgStatus hg_keypair_public_text(const struct HgKeyPair *kp, char **out);

/**
 * # Safety
 * `kp` must be a live handle and `out` writable.
 */
enum HgStatus hg_keypair_secret_text(const struct HgKeyPair *kp, char **out);

/**
 * Encrypts the element named `plaintext` (an integer for `z<m>` keys, a
 * cycle-notation label for permutation groups).
 *
 * # Safety
 * `kp` must be a live handle, `plaintext` a valid string, `out` writable.
 */
enum HgStatus hg_encrypt(const struct HgKeyPair *kp,
                         const char *plaintext,
                         uint64_t seed,
                         char **out);

/**
 * Decrypts to the plaintext label.
 *
 * # Safety
 * `kp` must be a live handle, `ciphertext` a valid string, `out` writable.
 */
enum HgStatus hg_decrypt(const struct HgKeyPair *kp, const char *ciphertext, char **out);

/**
 * Multiplies two ciphertexts under the public key.
 *
 * # Safety
 * `kp` must be a live handle, `c1` and `c2` valid strings, `out` writable.
 */
enum HgStatus hg_hommul(const struct HgKeyPair *kp, const char *c1, const char *c2, char **out);

/**
 * Parses a boolean circuit.
 *
 * # Safety
 * `text` must be a valid string and `out` writable.
 */
enum HgStatus hg_circuit_parse(const char *text, struct HgCircuit **out);

/**
 * # Safety
 * `c` must be NULL or a live handle.
 */
void hg_circuit_free(struct HgCircuit *c);

/**
 * Number of circuit inputs; 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live handle.
 */
uintptr_t hg_circuit_input_count(const struct HgCircuit *c);

/**
 * Evaluates the circuit on `n` input bytes (nonzero is true).
 *
 * # Safety
 * `c` must be a live handle, `bits` must point to `n` bytes, `out` writable.
 */
enum HgStatus hg_circuit_eval(const struct HgCircuit *c,
                              const uint8_t *bits,
                              uintptr_t n,
                              uint8_t *out);

/**
 * Compiles the circuit into a group program (`GPROG v1` text) over a builtin
 * unsolvable group such as `sym5` or `alt5`.
 *
 * # Safety
 * `c` must be a live handle, `group` a valid string, `out` writable.
 */
enum HgStatus hg_compile(const struct HgCircuit *c, const char *group, char **out);

/**
 * Runs the encrypted-circuit protocol: the key holder owns `c`, the other
 * party owns the `n` input bytes. Writes the output bit and, if `transcript`
 * is not NULL, the transcript text.
 *
 * # Safety
 * `kp` and `c` must be live handles, `bits` must point to `n` bytes, `out_bit`
 * writable, and `transcript` NULL or writable.
 */
enum HgStatus hg_protocol_circuit(const struct HgKeyPair *kp,
                                  const struct HgCircuit *c,
                                  const uint8_t *bits,
                                  uintptr_t n,
                                  uint64_t seed,
                                  uint8_t *out_bit,
                                  char **transcript);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMGROUP_H */
