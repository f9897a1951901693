#include "dynseq/rebuild.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynseq {

RebuildController::RebuildController(SmallStringConfig config) : cfg_(config), main_(config) {}

RebuildController RebuildController::build(SmallStringConfig config, std::span<const Code> codes) {
    RebuildController r(config);
    r.main_ = SmallString::build(config, codes);
    r.epoch_len_ = codes.size();
    return r;
}

std::size_t RebuildController::size() const noexcept { return boundary() + main_.size(); }

Code RebuildController::access(std::size_t i) const {
    const std::size_t p = boundary();
    if (i == 0 || i > size()) throw std::out_of_range("RebuildController::access: position out of range");
    return i <= p ? prefix_->access(i) : main_.access(i - p);
}

std::size_t RebuildController::rank(Code c, std::size_t i) const {
    if (i > size()) throw std::out_of_range("RebuildController::rank: position out of range");
    const std::size_t p = boundary();
    if (!prefix_) return main_.rank(c, i);
    return prefix_->rank(c, std::min(i, p)) + main_.rank(c, i > p ? i - p : 0);
}

std::optional<std::size_t> RebuildController::select(Code c, std::size_t j) const {
    if (!prefix_ || j == 0) return main_.select(c, j);
    const std::size_t p = boundary();
    const std::size_t in_prefix = prefix_->rank(c, p);
    if (j <= in_prefix) return prefix_->select(c, j);
    const auto s = main_.select(c, j - in_prefix);
    if (!s) return std::nullopt;
    return p + *s;
}

void RebuildController::insert(Code c, std::size_t i) {
    if (i == 0 || i > size() + 1) throw std::out_of_range("RebuildController::insert: position out of range");
    const std::size_t p = boundary();
    const bool to_suffix = prefix_ && i > p + 1;
    if (!prefix_)
        main_.insert(c, i);
    else if (to_suffix)
        main_.insert(c, i - p);
    else
        prefix_->insert(c, i);
    after_update(to_suffix);
}

Code RebuildController::erase(std::size_t i) {
    if (i == 0 || i > size()) throw std::out_of_range("RebuildController::erase: position out of range");
    const std::size_t p = boundary();
    const Code c = prefix_ && i <= p ? prefix_->erase(i) : main_.erase(i - p);
    after_update(false);
    return c;
}

void RebuildController::push_back(Code c) { main_.push_back(c); }

void RebuildController::after_update(bool inserted_into_suffix) {
    ++updates_;
    if (prefix_) {
        ++migration_updates_;
        transfer(inserted_into_suffix ? 4 : 3);
        return;
    }
    if (2 * updates_ > epoch_len_) {
        prefix_.emplace(cfg_);
        n0_ = main_.size();
        migration_updates_ = 1;
        transfer(3);
    }
}

void RebuildController::transfer(std::size_t count) {
    for (std::size_t t = 0; t < count && !main_.empty(); ++t) prefix_->push_back(main_.erase(1));
    if (!main_.empty()) return;
    main_ = std::move(*prefix_);
    prefix_.reset();
    log_.push_back({n0_, migration_updates_, main_.size()});
    epoch_len_ = main_.size();
    updates_ = 0;
}

SpaceReport RebuildController::space() const {
    SpaceReport r = main_.space();
    if (prefix_) r += prefix_->space();
    return r;
}

std::vector<std::string> RebuildController::validate() const {
    std::vector<std::string> out = main_.validate();
    if (prefix_) {
        for (auto& m : prefix_->validate()) out.push_back("prefix: " + m);
        if (migration_updates_ > (n0_ + 2) / 3)
            out.push_back("RebuildController: migration overran ceil(n0/3) updates");
    } else if (updates_ > 0 && 2 * updates_ > epoch_len_) {
        out.push_back("RebuildController: epoch threshold passed without migrating");
    }
    return out;
}

}  // namespace dynseq
