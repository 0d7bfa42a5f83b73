#ifndef DBK_DBK_HPP
#define DBK_DBK_HPP

#include "dbk/anneal.hpp"
#include "dbk/bitset.hpp"
#include "dbk/bounds.hpp"
#include "dbk/exact.hpp"
#include "dbk/graph.hpp"
#include "dbk/kcore.hpp"
#include "dbk/persistency.hpp"
#include "dbk/qubo.hpp"
#include "dbk/rng.hpp"
#include "dbk/solver.hpp"
#include "dbk/theta.hpp"

#endif  // DBK_DBK_HPP
