#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hredsum/decoder.hpp"
#include "hredsum/errors.hpp"

namespace hredsum {

// Reserved token ids.
inline constexpr int kPad = 0;
inline constexpr int kUnk = 1;
inline constexpr int kStart = 2;
inline constexpr int kEnd = 3;

class Vocabulary {
  public:
    // Most frequent cap-4 tokens (ties broken lexicographically) plus the
    // four reserved ids. Empty corpus is a contract error.
    static Vocabulary build(const std::vector<std::vector<std::string>>& token_streams,
                            std::size_t cap);

    int id(const std::string& token) const;  // kUnk when absent
    const std::string& token(int id) const;
    std::size_t size() const { return id_to_token_.size(); }
    std::int64_t count(const std::string& token) const;

    void save(const std::string& path) const;  // "token<TAB>count", rank order
    static Vocabulary load(const std::string& path);

  private:
    std::vector<std::string> id_to_token_;
    std::vector<std::int64_t> counts_;  // aligned with id_to_token_, 0 for reserved
    std::unordered_map<std::string, int> token_to_id_;
    void push(const std::string& tok, std::int64_t count);
};

struct RawExample {
    std::vector<std::string> article_sentences;  // pre-tokenized, whitespace-separated
    std::string abstract;
};

// One encoded training example.
struct Example {
    std::vector<std::vector<int>> sentences;  // encoder view, OOV -> kUnk
    std::vector<int> src_extended;            // flat source tokens, OOV -> extended ids
    ExtendedVocab ext;                        // per-example OOV table
    std::vector<int> target;                  // START ... END, extended-vocab ids
    std::vector<std::size_t> sentence_of_token;

    std::size_t source_len() const { return src_extended.size(); }
};

// Decode a sequence of extended-vocab ids back to tokens.
std::vector<std::string> decode_ids(const std::vector<int>& ids, const Vocabulary& vocab,
                                    const ExtendedVocab& ext);

// Sentence-boundary-aware truncation to max_doc_tokens (drop whole trailing
// sentences, then hard-cut the last kept one), target truncated to
// max_summary_tokens before the START/END wrap.
Example encode_example(const RawExample& raw, const Vocabulary& vocab,
                       std::size_t max_doc_tokens = 400, std::size_t max_summary_tokens = 100);

// Padded batch views. The per-example data stays authoritative; the padded
// matrices plus masks are the tensorized contract for consumers that want
// rectangular input.
struct Batch {
    std::vector<Example> examples;
    // [B × max_sentences × max_tokens] token ids, kPad-padded
    std::vector<std::vector<std::vector<int>>> padded_tokens;
    std::vector<std::vector<std::vector<std::uint8_t>>> token_mask;
    std::vector<std::vector<std::uint8_t>> sentence_mask;  // [B × max_sentences]
    // [B × max_target_steps] teacher-forcing targets and validity mask
    std::vector<std::vector<int>> padded_target;
    std::vector<std::vector<std::uint8_t>> target_mask;
};

// Seeded shuffle, then length-bucketed windows (sorted by source length
// inside each window of batch_size*8) to bound padding.
std::vector<Batch> make_batches(const std::vector<Example>& examples, std::size_t batch_size,
                                std::uint64_t seed);

// ---- corpus files: one JSON object per line,
//      {"article": ["tok tok ...", ...], "abstract": "tok ..."} ----

std::vector<RawExample> load_corpus(const std::string& path);
void save_corpus(const std::vector<RawExample>& corpus, const std::string& path);

// Desk-scale synthetic corpora.
//   lead1:        3-6 random sentences, target = first sentence
//   keyword-copy: filler sentences seeded with marker tokens that stay out of
//                 any frequency-capped vocab; target = markers in order
std::vector<RawExample> synth_corpus(const std::string& task, std::size_t n_examples,
                                     std::size_t vocab_size, std::uint64_t seed);

}  // namespace hredsum
