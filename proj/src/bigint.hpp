#ifndef QBRAIN_BIGINT_HPP
#define QBRAIN_BIGINT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qbrain {

// Minimal arbitrary-precision unsigned integer, enough for pattern counts of
// the form (d+1)^M which overflow 64 bits already at modest M.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    explicit BigUint(std::uint64_t v);

    // base^exp with base < 2^32
    static BigUint pow(std::uint64_t base, unsigned exp);

    BigUint& mul_small(std::uint64_t factor); // factor < 2^32

    std::string to_string() const;

    // -1, 0, +1
    int compare(const BigUint& other) const;

    bool fits_u64() const;
    std::uint64_t as_u64() const; // valid only when fits_u64()

    bool operator==(const BigUint& o) const { return compare(o) == 0; }
    bool operator<(const BigUint& o) const { return compare(o) < 0; }
    bool operator>(const BigUint& o) const { return compare(o) > 0; }
    bool operator<=(const BigUint& o) const { return compare(o) <= 0; }

private:
    // base 1e9, little endian
    std::vector<std::uint32_t> limbs_;
    void trim();
};

} // namespace qbrain

#endif
