#pragma once

#include <string>
#include <vector>

#include "ftc/ambient.hpp"
#include "ftc/perm.hpp"

namespace ftc {

struct SubgroupOptions {
  uint64_t lattice_bound = 10000;    // largest order handled by the lattice route
  uint64_t p_group_bound = 10000000; // largest p-group order for the Frattini route
};

// All maximal subgroups, each exactly once. p-groups go through the Frattini
// quotient (index-p subgroups above G'G^p); everything else enumerates the
// full subgroup lattice by cyclic extension and keeps the inclusion-maximal
// members. Throws std::length_error past the configured bounds.
std::vector<Subgroup> maximal_subgroups(const Ambient& amb, const Subgroup& g,
                                        const SubgroupOptions& opts = {});

// every subgroup of g (cyclic extension; complete since all ambients here
// have order 2^a 3^b and are solvable)
std::vector<Subgroup> subgroup_lattice(const Ambient& amb, const Subgroup& g,
                                       uint64_t bound = 10000);

// index-space derived subgroup of <gens> inside the ambient
std::vector<uint32_t> derived_subgroup_elems(const Ambient& amb,
                                             const std::vector<uint32_t>& gens);

// ---- abstract isomorphism of small groups (element lists of perms) ----

bool small_iso(const std::vector<Perm>& g, const std::vector<Perm>& h,
               uint64_t bound = 10000);

// short structure label for tiny groups: 1, C2, C3, C4, C2xC2, S3, C6, D4,
// Q8, Cn, ..., falling back to G<order>#<hash> past the named range
std::string small_group_name(const std::vector<Perm>& elems);

}  // namespace ftc
