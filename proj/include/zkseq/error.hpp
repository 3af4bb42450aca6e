#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zkseq {

enum class errc {
    invalid_modulus,
    invalid_argument,
    zero_element,
    non_unit_dilation,
    size_limit,
    rectification_infeasible,
    construction_failed,
    search_exhausted,
    assembly_mismatch,
};

constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::invalid_modulus: return "invalid-modulus";
    case errc::invalid_argument: return "invalid-argument";
    case errc::zero_element: return "zero-element";
    case errc::non_unit_dilation: return "non-unit-dilation";
    case errc::size_limit: return "size-limit";
    case errc::rectification_infeasible: return "rectification-infeasible";
    case errc::construction_failed: return "construction-failed";
    case errc::search_exhausted: return "search-exhausted";
    case errc::assembly_mismatch: return "assembly-mismatch";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the `errc` kinds.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

class rectification_infeasible : public error {
public:
    rectification_infeasible(std::uint64_t boxes, const std::string& what)
        : error(errc::rectification_infeasible, what), boxes_(boxes)
    {
    }

    /// Boxes per coordinate that were attempted.
    [[nodiscard]] std::uint64_t boxes() const noexcept { return boxes_; }

private:
    std::uint64_t boxes_;
};

} // namespace zkseq
