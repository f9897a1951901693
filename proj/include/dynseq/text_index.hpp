#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dynseq/small_seq.hpp"
#include "dynseq/wavelet.hpp"

namespace dynseq {

/// Rows sp..ep (1-based, inclusive) of the sorted-suffix matrix.
struct SearchRange {
    std::size_t sp = 1;
    std::size_t ep = 0;
    bool empty() const noexcept { return sp > ep; }
    std::size_t size() const noexcept { return empty() ? 0 : ep - sp + 1; }
};

using DocId = std::uint64_t;

/// Dynamic FM-index over a list of documents.
///
/// Document characters are codes 1..sigma; every document ends in its own
/// terminator, stored as code 0. Terminators sort below all characters and
/// among themselves by the document's rank in the registry, and suffixes
/// stop at their own terminator, so rows 1..m are the terminator suffixes
/// of documents 1..m. The BWT lives in a DynString over sigma + 1 codes;
/// `counts` holds how many rows start with each code, from which the
/// C-array is a prefix sum.
class TextCollection {
public:
    explicit TextCollection(std::uint32_t sigma = 255, DynStringConfig bwt_config = {});
    ~TextCollection();
    TextCollection(TextCollection&&) noexcept;
    TextCollection& operator=(TextCollection&&) noexcept;

    std::uint32_t sigma() const noexcept { return sigma_; }
    std::size_t document_count() const noexcept { return docs_.size(); }
    /// Characters plus terminators.
    std::size_t total_length() const noexcept { return bwt_.size(); }
    /// Handles in registry order.
    const std::vector<DocId>& documents() const noexcept { return docs_; }
    /// 1-based registry rank of a handle.
    std::size_t rank_of(DocId id) const;

    DocId insert(std::span<const Code> text);
    void erase(DocId id);
    std::vector<Code> extract(DocId id) const;

    SearchRange search(std::span<const Code> pattern) const;
    std::size_t count(std::span<const Code> pattern) const { return search(pattern).size(); }

    /// Rows whose first symbol is below c.
    std::uint64_t C(Code c) const;
    std::vector<Code> bwt() const;

    SpaceReport space() const;
    std::vector<std::string> validate() const;

private:
    class Counts;

    void check_text(std::span<const Code> text) const;

    std::uint32_t sigma_;
    DynString bwt_;
    std::unique_ptr<Counts> counts_;
    std::vector<DocId> docs_;
    DocId next_id_ = 1;
};

/// Canonical byte form: "SUCIDX1", u32 document count, then per document a
/// u64 length and the raw bytes, integers little-endian. Requires sigma <= 255.
void save_index(const TextCollection& t, std::ostream& out);
TextCollection load_index(std::istream& in);

}  // namespace dynseq
