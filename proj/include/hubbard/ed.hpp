#pragma once
#include "hubbard/ed/basis.hpp"
#include "hubbard/ed/hamiltonian.hpp"
#include "hubbard/ed/observables.hpp"
#include "hubbard/ed/solvers.hpp"
#include "hubbard/ed/spectrum.hpp"
#include "hubbard/ed/tilt.hpp"
