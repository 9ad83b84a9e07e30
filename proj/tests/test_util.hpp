#pragma once

#include <string>

#include <gtest/gtest.h>

#include "roofline/errors.hpp"

namespace roofline::testing {

// Runs f and returns the code of the roofline::Error it throws.
template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a roofline::Error";
    return ErrorCode::Io;
}

inline std::string fixture(const std::string& name) {
    return std::string(ROOFLINE_FIXTURES) + "/" + name;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

}  // namespace roofline::testing
