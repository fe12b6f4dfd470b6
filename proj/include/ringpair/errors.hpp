#pragma once

#include <stdexcept>
#include <string>

namespace ringpair {

// Base of every error the library throws. The CLI maps each subclass to an
// exit code (validation 1, invariant 2, numerical 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// A resonance denominator (1 - rho*alpha*e^{i theta}, or D) vanished.
class PoleError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// |G| > 1 where the single-mode noise magnitude needs |G| <= 1.
class UnitarityError : public Error {
public:
    using Error::Error;
};

}  // namespace ringpair
