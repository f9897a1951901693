#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynseq/small_string.hpp"

namespace dynseq {

/// Owns a SmallString and periodically replaces it by a freshly built one
/// without ever storing a character twice.
///
/// Once the updates of the current epoch exceed half the length the epoch
/// started with, a migration begins: a new structure (the prefix S_p) grows
/// at the back while characters are taken from the front of the old one
/// (the suffix S_s). Every update moves three characters across, or four
/// when it inserted into S_s, so migration ends within ceil(n0 / 3)
/// updates, where n0 is the length when it began. Queries are answered
/// from S_p and S_s together.
class RebuildController {
public:
    struct Epoch {
        std::size_t n0;            // length when migration started
        std::size_t updates;       // updates until S_s emptied, the starting one included
        std::size_t final_length;  // length when the fresh structure took over
    };

    explicit RebuildController(SmallStringConfig config);
    static RebuildController build(SmallStringConfig config, std::span<const Code> codes);

    std::size_t size() const noexcept;
    unsigned sigma() const noexcept { return cfg_.sigma; }
    const SmallStringConfig& config() const noexcept { return cfg_; }

    Code access(std::size_t i) const;
    std::size_t rank(Code c, std::size_t i) const;
    std::optional<std::size_t> select(Code c, std::size_t j) const;
    void insert(Code c, std::size_t i);
    Code erase(std::size_t i);
    /// Appends without counting as an update of the epoch.
    void push_back(Code c);

    bool migrating() const noexcept { return prefix_.has_value(); }
    /// |S_p|; zero outside migration.
    std::size_t boundary() const noexcept { return prefix_ ? prefix_->size() : 0; }
    /// |S_s|, or the whole length outside migration.
    std::size_t suffix_size() const noexcept { return main_.size(); }
    std::size_t updates_in_epoch() const noexcept { return updates_; }
    std::size_t epoch_start_length() const noexcept { return epoch_len_; }
    const std::vector<Epoch>& epochs() const noexcept { return log_; }
    /// The structure holding S_s (or everything outside migration).
    const SmallString& current() const noexcept { return main_; }

    SpaceReport space() const;
    std::vector<std::string> validate() const;

private:
    void after_update(bool inserted_into_suffix);
    void transfer(std::size_t count);

    SmallStringConfig cfg_;
    SmallString main_;
    std::optional<SmallString> prefix_;
    std::size_t epoch_len_ = 0;
    std::size_t updates_ = 0;
    std::size_t n0_ = 0;
    std::size_t migration_updates_ = 0;
    std::vector<Epoch> log_;
};

}  // namespace dynseq
