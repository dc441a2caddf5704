#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mfcong {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/* Malformed or inconsistent input data. Maps to CLI exit status 64. */
class InputError : public Error {
  public:
    using Error::Error;
};

class FieldMismatch : public Error {
  public:
    FieldMismatch() : Error("elements belong to different number fields") {}
    explicit FieldMismatch(std::string const& what) : Error(what) {}
};

/* Dedekind's criterion could not certify p-maximality and no explicit
 * place data was supplied for p. */
class IndexDivisible : public Error {
  public:
    explicit IndexDivisible(std::int64_t p);
    std::int64_t prime() const { return p_; }

  private:
    std::int64_t p_;
};

class InsufficientPrecision : public Error {
  public:
    InsufficientPrecision(std::int64_t needed, std::int64_t have);
    std::int64_t needed() const { return needed_; }
    std::int64_t have() const { return have_; }

  private:
    std::int64_t needed_;
    std::int64_t have_;
};

/* An internal consistency tripwire fired: this is an arithmetic bug, not bad input. */
class InternalError : public Error {
  public:
    using Error::Error;
};

}  // namespace mfcong
