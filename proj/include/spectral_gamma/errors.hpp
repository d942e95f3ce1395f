#pragma once

#include <stdexcept>
#include <string>

namespace sgamma {

/// Base class for every error raised by the library. The CLI maps the
/// category onto an exit code.
class Error : public std::runtime_error {
public:
    enum class Category { Structural, Domain, Resource, Numerical, Parse, Capability };

    Error(Category cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}

    Category category() const noexcept { return cat_; }

private:
    Category cat_;
};

// Mismatched group specs, element kinds, matrix sizes.
struct StructuralError : Error {
    explicit StructuralError(const std::string& w) : Error(Category::Structural, w) {}
};

// Violated preconditions: empty sets, zero elements, points outside a region.
struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(Category::Domain, w) {}
};

// A configured cap (ball size, support size, node count) was exceeded.
struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(Category::Resource, w) {}
};

// Analyticity, conditioning and geometric degeneracy failures.
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(Category::Numerical, w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(Category::Parse, w) {}
};

// The requested norm or oracle does not exist for this group.
struct CapabilityError : Error {
    explicit CapabilityError(const std::string& w) : Error(Category::Capability, w) {}
};

}  // namespace sgamma
