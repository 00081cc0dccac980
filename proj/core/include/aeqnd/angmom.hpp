#pragma once

#include "aeqnd/halfint.hpp"

namespace aeqnd {

// <J M | j1 m1; j2 m2>, Condon-Shortley phases. Zero when M != m1 + m2 or the
// triangle rule fails. Throws InvalidArgument for malformed (j, m) pairs.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J,
                      HalfInt M);

// {j1 j2 j3; j4 j5 j6}. Zero when any triad fails the triangle rule.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5,
                HalfInt j6);

// Relative hyperfine oscillator strength for J,F -> J',F' with nuclear spin I:
//   (-1)^(F'+1+J+I) sqrt((2J'+1)(2F+1)) {F' I J'; J 1 F}
// With this phase <F'M'|D_q|FM> = O * <F' M'|1 q; F M> reproduces the
// uncoupled-basis matrix element of a unit-reduced electronic dipole.
double oscillator_strength(HalfInt Jp, HalfInt Fp, HalfInt J, HalfInt F, HalfInt I);

// Drops the per-thread memo tables (testing / memory hygiene).
void clear_angmom_cache();

}  // namespace aeqnd
