#include "hredsum/data.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hredsum/rng.hpp"
#include "json.hpp"

namespace hredsum {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

const char* kReserved[4] = {"<pad>", "<unk>", "<start>", "<end>"};

}  // namespace

void Vocabulary::push(const std::string& tok, std::int64_t count) {
    token_to_id_[tok] = static_cast<int>(id_to_token_.size());
    id_to_token_.push_back(tok);
    counts_.push_back(count);
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_streams,
                             std::size_t cap) {
    if (token_streams.empty()) throw ContractError("build_vocab: empty corpus");
    if (cap < 5) throw ContractError("build_vocab: cap must leave room past reserved ids");
    std::map<std::string, std::int64_t> freq;  // ordered -> lexicographic ties for free
    for (const auto& stream : token_streams)
        for (const auto& tok : stream) ++freq[tok];
    if (freq.empty()) throw ContractError("build_vocab: empty corpus");

    std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    Vocabulary v;
    for (const char* r : kReserved) v.push(r, 0);
    for (const auto& [tok, count] : ranked) {
        if (v.size() >= cap) break;
        v.push(tok, count);
    }
    return v;
}

int Vocabulary::id(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size())
        throw ContractError("vocab: id " + std::to_string(id) + " out of range");
    return id_to_token_[id];
}

std::int64_t Vocabulary::count(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? 0 : counts_[it->second];
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write vocabulary file " + path);
    for (std::size_t i = 0; i < id_to_token_.size(); ++i)
        os << id_to_token_[i] << '\t' << counts_[i] << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read vocabulary file " + path);
    Vocabulary v;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw IoError("malformed vocabulary line in " + path);
        v.push(line.substr(0, tab), std::stoll(line.substr(tab + 1)));
    }
    if (v.size() < 4) throw IoError("vocabulary file too small: " + path);
    return v;
}

std::vector<std::string> decode_ids(const std::vector<int>& ids, const Vocabulary& vocab,
                                    const ExtendedVocab& ext) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (id >= 0 && static_cast<std::size_t>(id) < ext.base_size)
            out.push_back(vocab.token(id));
        else if (id >= 0 && static_cast<std::size_t>(id) < ext.size())
            out.push_back(ext.oovs[id - static_cast<int>(ext.base_size)]);
        else
            throw ContractError("decode_ids: id " + std::to_string(id) + " out of range");
    }
    return out;
}

Example encode_example(const RawExample& raw, const Vocabulary& vocab,
                       std::size_t max_doc_tokens, std::size_t max_summary_tokens) {
    std::vector<std::vector<std::string>> sentences;
    for (const auto& s : raw.article_sentences) {
        auto toks = split_ws(s);
        if (!toks.empty()) sentences.push_back(std::move(toks));
    }
    if (sentences.empty()) throw ContractError("encode_example: empty article");

    // sentence-boundary-aware truncation
    std::vector<std::vector<std::string>> kept;
    std::size_t total = 0;
    for (auto& s : sentences) {
        if (total >= max_doc_tokens) break;
        if (total + s.size() > max_doc_tokens) {
            if (kept.empty()) {  // single overlong sentence: hard cut
                s.resize(max_doc_tokens);
                kept.push_back(std::move(s));
                total = max_doc_tokens;
            }
            break;
        }
        total += s.size();
        kept.push_back(std::move(s));
    }

    Example ex;
    ex.ext.base_size = vocab.size();
    std::unordered_map<std::string, int> oov_ids;
    for (std::size_t si = 0; si < kept.size(); ++si) {
        std::vector<int> enc_row;
        for (const auto& tok : kept[si]) {
            int base = vocab.id(tok);
            enc_row.push_back(base);
            int ext_id = base;
            if (base == kUnk) {
                auto it = oov_ids.find(tok);
                if (it == oov_ids.end()) {
                    ext_id = static_cast<int>(ex.ext.size());
                    oov_ids.emplace(tok, ext_id);
                    ex.ext.oovs.push_back(tok);
                } else {
                    ext_id = it->second;
                }
            }
            ex.src_extended.push_back(ext_id);
            ex.sentence_of_token.push_back(si);
        }
        ex.sentences.push_back(std::move(enc_row));
    }

    auto abs_toks = split_ws(raw.abstract);
    if (abs_toks.size() > max_summary_tokens) abs_toks.resize(max_summary_tokens);
    ex.target.push_back(kStart);
    for (const auto& tok : abs_toks) {
        int base = vocab.id(tok);
        if (base == kUnk) {
            auto it = oov_ids.find(tok);
            if (it != oov_ids.end()) base = it->second;  // copyable from source
        }
        ex.target.push_back(base);
    }
    ex.target.push_back(kEnd);
    return ex;
}

std::vector<Batch> make_batches(const std::vector<Example>& examples, std::size_t batch_size,
                                std::uint64_t seed) {
    std::vector<std::size_t> order(examples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng = Rng::for_name(seed, "batch_shuffle");
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);

    // sort by source length within windows of batch_size*8
    const std::size_t window = batch_size * 8;
    for (std::size_t w = 0; w < order.size(); w += window) {
        auto end = std::min(w + window, order.size());
        std::stable_sort(order.begin() + w, order.begin() + end, [&](std::size_t a, std::size_t b) {
            return examples[a].source_len() < examples[b].source_len();
        });
    }

    std::vector<Batch> batches;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
        Batch b;
        auto end = std::min(start + batch_size, order.size());
        for (std::size_t i = start; i < end; ++i) b.examples.push_back(examples[order[i]]);

        std::size_t max_sents = 0, max_toks = 0, max_tgt = 0;
        for (const auto& ex : b.examples) {
            max_sents = std::max(max_sents, ex.sentences.size());
            for (const auto& s : ex.sentences) max_toks = std::max(max_toks, s.size());
            max_tgt = std::max(max_tgt, ex.target.size() - 1);  // teacher-forced steps
        }
        for (const auto& ex : b.examples) {
            std::vector<std::vector<int>> tok_rows(max_sents, std::vector<int>(max_toks, kPad));
            std::vector<std::vector<std::uint8_t>> mask_rows(
                max_sents, std::vector<std::uint8_t>(max_toks, 0));
            std::vector<std::uint8_t> smask(max_sents, 0);
            for (std::size_t si = 0; si < ex.sentences.size(); ++si) {
                smask[si] = 1;
                for (std::size_t ti = 0; ti < ex.sentences[si].size(); ++ti) {
                    tok_rows[si][ti] = ex.sentences[si][ti];
                    mask_rows[si][ti] = 1;
                }
            }
            std::vector<int> tgt(max_tgt, kPad);
            std::vector<std::uint8_t> tmask(max_tgt, 0);
            for (std::size_t t = 0; t + 1 < ex.target.size(); ++t) {
                tgt[t] = ex.target[t + 1];  // predictions, shifted past START
                tmask[t] = 1;
            }
            b.padded_tokens.push_back(std::move(tok_rows));
            b.token_mask.push_back(std::move(mask_rows));
            b.sentence_mask.push_back(std::move(smask));
            b.padded_target.push_back(std::move(tgt));
            b.target_mask.push_back(std::move(tmask));
        }
        batches.push_back(std::move(b));
    }
    return batches;
}

std::vector<RawExample> load_corpus(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read corpus file " + path);
    std::vector<RawExample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        RawExample ex;
        for (const auto& s : j.at("article")) ex.article_sentences.push_back(s.get<std::string>());
        ex.abstract = j.at("abstract").get<std::string>();
        out.push_back(std::move(ex));
    }
    return out;
}

void save_corpus(const std::vector<RawExample>& corpus, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write corpus file " + path);
    for (const auto& ex : corpus) {
        nlohmann::json j;
        j["article"] = ex.article_sentences;
        j["abstract"] = ex.abstract;
        os << j.dump() << '\n';
    }
}

namespace {

std::string word_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%04zu", i);
    return buf;
}

std::string marker_name(std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "@@m%05zu@@", i);
    return buf;
}

std::string join(const std::vector<std::string>& toks) {
    std::string s;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) s += ' ';
        s += toks[i];
    }
    return s;
}

}  // namespace

std::vector<RawExample> synth_corpus(const std::string& task, std::size_t n_examples,
                                     std::size_t vocab_size, std::uint64_t seed) {
    if (task != "lead1" && task != "keyword-copy")
        throw ContractError("synth_corpus: unknown task " + task);
    // filler types fit a vocab cap of vocab_size + 4 reserved slots, so the
    // once-off markers are the only tokens that miss the frequency cut
    const std::size_t n_words = vocab_size;
    Rng rng = Rng::for_name(seed, "synth/" + task);
    std::vector<RawExample> out;
    out.reserve(n_examples);
    std::size_t next_marker = 0;

    for (std::size_t n = 0; n < n_examples; ++n) {
        RawExample ex;
        std::size_t n_sents = 3 + rng.below(4);  // 3..6
        std::vector<std::vector<std::string>> sents(n_sents);
        for (auto& s : sents) {
            std::size_t len = 4 + rng.below(6);  // 4..9
            for (std::size_t i = 0; i < len; ++i) s.push_back(word_name(rng.below(n_words)));
        }
        if (task == "lead1") {
            ex.abstract = join(sents[0]);
        } else {
            std::size_t n_markers = 2 + rng.below(2);  // 2..3, <= n_sents
            std::vector<std::string> markers;
            for (std::size_t i = 0; i < n_markers; ++i)
                markers.push_back(marker_name(next_marker++));
            // distinct sentences, increasing, so target order == source order
            for (std::size_t i = 0; i < n_markers; ++i) {
                std::size_t si = i * n_sents / n_markers;
                std::size_t pos = rng.below(sents[si].size() + 1);
                sents[si].insert(sents[si].begin() + pos, markers[i]);
            }
            ex.abstract = join(markers);
        }
        for (auto& s : sents) ex.article_sentences.push_back(join(s));
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace hredsum
