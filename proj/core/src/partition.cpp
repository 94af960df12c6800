#include "fedsq/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fedsq/error.hpp"
#include "fedsq/rng.hpp"

namespace fedsq {

std::string scheme_name(Scheme s) {
  return s == Scheme::IID ? "iid" : "dirichlet";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "iid") return Scheme::IID;
  if (name == "dirichlet") return Scheme::Dirichlet;
  throw ConfigError("unknown partition scheme '" + name + "'");
}

void PartitionPlan::validate(std::size_t dataset_size) const {
  std::vector<bool> seen(dataset_size, false);
  std::size_t total = 0;
  for (std::size_t c = 0; c < assignments.size(); ++c) {
    if (assignments[c].empty()) {
      throw PartitionError("client " + std::to_string(c) + " received no samples");
    }
    for (std::size_t idx : assignments[c]) {
      if (idx >= dataset_size || seen[idx]) {
        throw PartitionError("assignments are not a disjoint cover (index " +
                             std::to_string(idx) + ")");
      }
      seen[idx] = true;
      ++total;
    }
  }
  if (total != dataset_size) {
    throw PartitionError("assignments cover " + std::to_string(total) + " of " +
                         std::to_string(dataset_size) + " samples");
  }
}

PartitionPlan iid_split(const Dataset& data, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InputError("client count must be >= 1");
  if (data.size() < m) {
    throw InputError("dataset of " + std::to_string(data.size()) + " samples cannot feed " +
                     std::to_string(m) + " clients");
  }
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);

  PartitionPlan plan;
  plan.scheme = Scheme::IID;
  plan.seed = seed;
  plan.assignments.resize(m);
  const std::size_t base = data.size() / m;
  const std::size_t extra = data.size() % m;  // first `extra` clients get one more
  std::size_t pos = 0;
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t take = base + (c < extra ? 1 : 0);
    plan.assignments[c].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                               idx.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  plan.validate(data.size());
  return plan;
}

PartitionPlan dirichlet_split(const Dataset& data, std::size_t m, double alpha,
                              std::uint64_t seed, std::size_t min_per_client) {
  if (m == 0) throw InputError("client count must be >= 1");
  if (!(alpha > 0.0)) throw InputError("dirichlet alpha must be > 0");
  if (min_per_client == 0) min_per_client = 1;
  if (data.size() < m * min_per_client) {
    throw InputError("dataset of " + std::to_string(data.size()) +
                     " samples cannot give every one of " + std::to_string(m) +
                     " clients " + std::to_string(min_per_client) + " samples");
  }
  data.validate();

  // Sample indices grouped by class, in dataset order.
  std::vector<std::vector<std::size_t>> by_class(data.class_count);
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);

  constexpr std::size_t kMaxRetries = 100;
  for (std::size_t attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng(combine_seed(seed, attempt));
    PartitionPlan plan;
    plan.scheme = Scheme::Dirichlet;
    plan.alpha = alpha;
    plan.seed = seed;
    plan.assignments.resize(m);
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
      const std::vector<double> p = rng.dirichlet(alpha, m);
      for (std::size_t idx : by_class[cls]) {
        const double u = rng.uniform();
        double cum = 0.0;
        std::size_t chosen = m - 1;
        for (std::size_t c = 0; c < m; ++c) {
          cum += p[c];
          if (u < cum) {
            chosen = c;
            break;
          }
        }
        plan.assignments[chosen].push_back(idx);
      }
    }
    const bool feasible = std::all_of(plan.assignments.begin(), plan.assignments.end(),
                                      [&](const auto& a) { return a.size() >= min_per_client; });
    if (feasible) {
      plan.validate(data.size());
      return plan;
    }
  }
  throw PartitionError("dirichlet split could not give every client " +
                       std::to_string(min_per_client) + " samples within 100 redraws");
}

double heterogeneity_index(const PartitionPlan& plan, const Dataset& data) {
  plan.validate(data.size());
  std::vector<double> global(data.class_count, 0.0);
  for (std::size_t l : data.labels) global[l] += 1.0;
  for (auto& g : global) g /= static_cast<double>(data.size());

  double sum_tv = 0.0;
  for (const auto& shard : plan.assignments) {
    std::vector<double> hist(data.class_count, 0.0);
    for (std::size_t idx : shard) hist[data.labels[idx]] += 1.0;
    double tv = 0.0;
    for (std::size_t c = 0; c < hist.size(); ++c) {
      tv += std::abs(hist[c] / static_cast<double>(shard.size()) - global[c]);
    }
    sum_tv += 0.5 * tv;
  }
  return sum_tv / static_cast<double>(plan.clients());
}

void store_plan(const PartitionPlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "scheme=" << scheme_name(plan.scheme) << "\n";
  out << "alpha=" << plan.alpha << "\n";
  out << "seed=" << plan.seed << "\n";
  out << "clients=" << plan.clients() << "\n";
  for (std::size_t c = 0; c < plan.clients(); ++c) {
    out << "client " << c << ":";
    for (std::size_t idx : plan.assignments[c]) out << " " << idx;
    out << "\n";
  }
  if (!out) throw FormatError("write to '" + path + "' failed");
}

PartitionPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  auto next_line = [&in, &path](const std::string& what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("'" + path + "': missing " + what);
    return line;
  };
  auto kv = [&path](const std::string& line, const std::string& key) {
    if (line.rfind(key + "=", 0) != 0) {
      throw FormatError("'" + path + "': expected '" + key + "=', got '" + line + "'");
    }
    return line.substr(key.size() + 1);
  };

  PartitionPlan plan;
  plan.scheme = scheme_from_name(kv(next_line("scheme"), "scheme"));
  plan.alpha = std::stod(kv(next_line("alpha"), "alpha"));
  plan.seed = std::stoull(kv(next_line("seed"), "seed"));
  const std::size_t m = std::stoull(kv(next_line("clients"), "clients"));
  plan.assignments.resize(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::istringstream is(next_line("client " + std::to_string(c)));
    std::string word;
    is >> word;
    std::size_t id = 0;
    char colon = 0;
    if (word != "client" || !(is >> id) || id != c || !(is >> colon) || colon != ':') {
      throw FormatError("'" + path + "': malformed client line " + std::to_string(c));
    }
    std::size_t idx;
    while (is >> idx) plan.assignments[c].push_back(idx);
  }
  return plan;
}

}  // namespace fedsq
