// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file error.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/error.hpp"

namespace hk
{
Error::Error(ErrorCode code, std::string const& what)
    : std::runtime_error(what), code_(code)
{
}

void fail(ErrorCode code, std::string const& what)
{
    throw Error(code, std::string(to_cstring(code)) + ": " + what);
}

char const* to_cstring(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::domain:
            return "domain error";
        case ErrorCode::unsupported:
            return "unsupported";
        case ErrorCode::parse:
            return "parse error";
        case ErrorCode::io:
            return "i/o error";
        case ErrorCode::invalid_argument:
            return "invalid argument";
    }
    return "error";
}
}  // namespace hk
