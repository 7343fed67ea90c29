#ifndef NATHANSON_BASIS_HPP
#define NATHANSON_BASIS_HPP

#include <optional>

#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"

namespace nathanson
{

/// Class j such that every bit of n lies in W_j, or nullopt when the bits
/// straddle two classes (n is not in A). Throws ZeroNotInA for n = 0.
inline std::optional<ClassIndex> classify_element(const Partition& p, const ExponentSet& n)
{
    if(n.empty()) { throw Error(ErrorCode::ZeroNotInA, "0 has an empty binary expansion"); }
    const ClassIndex first = p.classify(n.lowest());
    for(Exponent e : n.exponents())
    {
        if(p.classify(e) != first) { return std::nullopt; }
    }
    return first;
}

inline bool is_in_A(const Partition& p, const ExponentSet& n)
{
    return !n.empty() && classify_element(p, n).has_value();
}

/// n ∈ A(W_j)
inline bool is_in_A_W(const Partition& p, const ExponentSet& n, ClassIndex j)
{
    if(n.empty()) { return false; }
    for(Exponent e : n.exponents())
    {
        if(p.classify(e) != j) { return false; }
    }
    return true;
}

} // namespace nathanson
#endif // NATHANSON_BASIS_HPP
