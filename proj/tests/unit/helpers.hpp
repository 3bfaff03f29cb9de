#pragma once

#include <doctest.h>

#include "nordenkit/sampler.hpp"

namespace nk::test {

inline double rel(const Tensor3& a, const Tensor3& b) {
    return relative((a - b).norm(), std::max(a.norm(), b.norm()));
}

template <class Fn>
ErrorKind error_kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an nk::Error");
    return ErrorKind::Dimension;
}

}  // namespace nk::test
