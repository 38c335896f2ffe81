#pragma once

#include "g2r/graph.hpp"
#include "g2r/rng.hpp"

namespace g2r {

// Connected Erdos-Renyi G(n, p) sample. Draws are rejected until one is
// connected, so the result follows G(n, p) conditioned on connectivity.
// Throws std::runtime_error after `max_attempts` rejected draws.
Graph generate_er(int n, double p, RngStream& rng, int max_attempts = 10000);

Graph generate_er(int n, double p, std::uint64_t seed,
                  int max_attempts = 10000);

}  // namespace g2r
