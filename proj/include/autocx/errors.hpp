#ifndef AUTOCX_ERRORS_HPP
#define AUTOCX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace autocx {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// The same ordered state pair would need two different symbols.
class LabelConflict : public Error {
public:
    using Error::Error;
};

class NotUniquelyAccepting : public Error {
public:
    using Error::Error;
};

/// A state sequence cannot be the walk of a unique-path witness.
class InvalidWitnessSequence : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class CorruptRecord : public Error {
public:
    using Error::Error;
};

} // namespace autocx

#endif // AUTOCX_ERRORS_HPP
