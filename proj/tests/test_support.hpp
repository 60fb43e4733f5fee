#pragma once

#include <doctest.h>

#include <functional>

#include "cbct/errors.hpp"

namespace cbct::test {

inline ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no cbct::Error thrown");
    return ErrorCode::internal;
}

}  // namespace cbct::test
