#include "bigint.hpp"

#include <cassert>
#include <cstdio>

namespace qbrain {

namespace {
constexpr std::uint64_t kBase = 1000000000ull;
}

BigUint::BigUint(std::uint64_t v)
{
    limbs_.clear();
    do {
        limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
        v /= kBase;
    } while (v != 0);
}

void BigUint::trim()
{
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::mul_small(std::uint64_t factor)
{
    assert(factor < (1ull << 32));
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        std::uint64_t acc = static_cast<std::uint64_t>(limb) * factor + carry;
        limb = static_cast<std::uint32_t>(acc % kBase);
        carry = acc / kBase;
    }
    while (carry != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
        carry /= kBase;
    }
    trim();
    return *this;
}

BigUint BigUint::pow(std::uint64_t base, unsigned exp)
{
    assert(base < (1ull << 32));
    BigUint result(1);
    for (unsigned i = 0; i < exp; ++i) result.mul_small(base);
    return result;
}

std::string BigUint::to_string() const
{
    std::string out = std::to_string(limbs_.back());
    char buf[16];
    for (std::size_t i = limbs_.size(); i-- > 1;) {
        std::snprintf(buf, sizeof(buf), "%09u", limbs_[i - 1]);
        out += buf;
    }
    return out;
}

int BigUint::compare(const BigUint& other) const
{
    if (limbs_.size() != other.limbs_.size())
        return limbs_.size() < other.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
    }
    return 0;
}

bool BigUint::fits_u64() const
{
    // 3 limbs can hold up to ~1e27; check against 2^64-1 explicitly.
    if (limbs_.size() > 3) return false;
    BigUint max64(UINT64_MAX);
    return compare(max64) <= 0;
}

std::uint64_t BigUint::as_u64() const
{
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return v;
}

} // namespace qbrain
