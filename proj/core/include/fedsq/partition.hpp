#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedsq/dataset.hpp"

namespace fedsq {

enum class Scheme { IID, Dirichlet };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct PartitionPlan {
  std::vector<std::vector<std::size_t>> assignments;  // per-client index lists
  Scheme scheme = Scheme::IID;
  double alpha = 0.0;  // Dirichlet concentration ( 0 for IID)
  std::uint64_t seed = 0;

  std::size_t clients() const { return assignments.size(); }
  // Disjoint cover of 0..n-1 with every client non-empty.
  void validate(std::size_t dataset_size) const;
};

// Uniform random assignment into near-equal shards (sizes differ by <= 1).
PartitionPlan iid_split(const Dataset& data, std::size_t m, std::uint64_t seed);

// Label-skewed split: per class, client proportions ~ Dirichlet(alpha * 1_m),
// samples assigned by sequential categorical draws. Redraws with an
// incremented seed (at most 100 times) until every client holds
// >= min_per_client samples.
PartitionPlan dirichlet_split(const Dataset& data, std::size_t m, double alpha,
                              std::uint64_t seed, std::size_t min_per_client);

// Mean total-variation distance between client label distributions and the
// global label distribution; 0 iff every client matches it exactly.
double heterogeneity_index(const PartitionPlan& plan, const Dataset& data);

// Structured-text round trip for reproducibility and inspection.
void store_plan(const PartitionPlan& plan, const std::string& path);
PartitionPlan load_plan(const std::string& path);

}  // namespace fedsq
