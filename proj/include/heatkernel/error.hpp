// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/error.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>

namespace hk
{
//---------------------------------------------------------------------------//
enum class ErrorCode
{
    domain = 1,  //!< Argument outside the mathematical domain
    unsupported,  //!< Valid input this build does not handle
    parse,  //!< Malformed file or inline spec
    io,  //!< File could not be read or written
    invalid_argument,  //!< Inconsistent configuration
};

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& what);
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, std::string const& what);

char const* to_cstring(ErrorCode code);

//! Throw a domain error unless the condition holds
inline void require_domain(bool cond, char const* what)
{
    if (!cond)
        fail(ErrorCode::domain, what);
}

}  // namespace hk
