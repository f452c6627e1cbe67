#pragma once

#include <stdexcept>
#include <string>

namespace latbound {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct BadInput : Error {
    explicit BadInput(const std::string& what) : Error(what) {}
};

// Gram matrix is singular where an inverse is required.
struct SingularGram : Error {
    explicit SingularGram(const std::string& what) : Error(what) {}
};

// Pairing restricted to a sublattice degenerated unexpectedly.
struct DegenerateSublattice : Error {
    explicit DegenerateSublattice(const std::string& what) : Error(what) {}
};

struct NotDefinite : Error {
    explicit NotDefinite(const std::string& what) : Error(what) {}
};

// Covector fails the characteristic parity congruence.
struct ParityViolation : Error {
    explicit ParityViolation(const std::string& what) : Error(what) {}
};

struct BadFraction : Error {
    explicit BadFraction(const std::string& what) : Error(what) {}
};

// Seifert form does not describe a rational homology sphere.
struct NotQHS : Error {
    explicit NotQHS(const std::string& what) : Error(what) {}
};

// Seifert form is not in normal form where one is required.
struct NotNormal : Error {
    explicit NotNormal(const std::string& what) : Error(what) {}
};

struct NotFullRank : Error {
    explicit NotFullRank(const std::string& what) : Error(what) {}
};

struct NonSquareRatio : Error {
    explicit NonSquareRatio(const std::string& what) : Error(what) {}
};

struct RankCapExceeded : Error {
    explicit RankCapExceeded(const std::string& what) : Error(what) {}
};

struct DeadlineExceeded : Error {
    explicit DeadlineExceeded(const std::string& what) : Error(what) {}
};

} // namespace latbound
