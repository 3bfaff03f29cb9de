#pragma once

// Cached class subspaces attached to a structure. Internal to the library and
// its tests.

#include <array>
#include <memory>
#include <mutex>

#include "nordenkit/subspace.hpp"

namespace nk::detail {

struct EvenFSpaces {
    Subspace adm;
    std::array<Subspace, 3> w;  // W1, W2, W3
    DirectSum split;
};

struct EvenTSpaces {
    Subspace anti;
    Subspace a_plus;  // A(T) = T
    Subspace t3, t4;
    DirectSum split34;
};

struct EvenCache {
    std::once_flag f_once, t_once;
    std::unique_ptr<EvenFSpaces> f;
    std::unique_ptr<EvenTSpaces> t;
};

struct OddFSpaces {
    Subspace adm;
    std::array<Subspace, 11> f;  // F1..F11
    DirectSum split;
    // images of the class subspaces under F -> (N, N_hat), flattened as [N; N_hat]
    std::array<Subspace, 11> pair;
    DirectSum pair_split;
};

struct OddTSpaces {
    Subspace anti;
    std::array<Subspace, 15> t;  // T1..T15
    DirectSum split;
};

struct OddCache {
    std::once_flag f_once, t_once;
    std::unique_ptr<OddFSpaces> f;
    std::unique_ptr<OddTSpaces> t;
};

}  // namespace nk::detail
