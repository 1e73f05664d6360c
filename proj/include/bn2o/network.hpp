#ifndef BN2O_NETWORK_HPP
#define BN2O_NETWORK_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bn2o {

// A disease hypothesis with its marginal prior p(d+).
struct DiseaseSpec {
  std::string id;
  std::string name;
  double prior = 0.0;
};

// A binary finding with its leak probability: the chance it is present with
// no disease present at all.
struct FindingSpec {
  std::string id;
  std::string name;
  double leak = 0.0;
};

// Causal strength q: the probability the disease turns the finding from
// absent to present. q = 0 is not representable; omit the link instead.
struct CausalLink {
  std::string disease;
  std::string finding;
  double q = 0.0;
};

// Raw parse/build product. Validation turns it into a Network.
struct NetworkSpec {
  std::vector<DiseaseSpec> diseases;
  std::vector<FindingSpec> findings;
  std::vector<CausalLink> links;
};

// Total assignment of present/absent to every disease, indexed by ordinal.
struct DiseaseInstance {
  std::vector<std::uint8_t> present;
};

// Observed evidence: disjoint sets of positive and negative finding ids plus
// an optional gold-standard disease set. Findings in neither set are
// unobserved and ignored by every model.
struct CaseEvidence {
  std::string case_id;
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> gold;
};

struct CaseStats {
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::size_t n_gold = 0;
};

inline CaseStats case_stats(const CaseEvidence& c) {
  return {c.positive.size(), c.negative.size(), c.gold.size()};
}

/// Validated bipartite noisy-OR network. Immutable once constructed; all
/// inference operations share it read-only. Ordinals follow file order and
/// are the tie-breakers everywhere.
class Network {
public:
  struct Arc {
    int ordinal;  // neighbor on the other layer
    double q;
  };

  /// Checks every type invariant and builds the adjacency indexes.
  /// Throws ValidationError naming the offending entity.
  static Network validate(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  int n_diseases() const { return static_cast<int>(spec_.diseases.size()); }
  int n_findings() const { return static_cast<int>(spec_.findings.size()); }

  const DiseaseSpec& disease(int ordinal) const { return spec_.diseases[ordinal]; }
  const FindingSpec& finding(int ordinal) const { return spec_.findings[ordinal]; }
  double prior(int disease_ordinal) const { return spec_.diseases[disease_ordinal].prior; }
  double leak(int finding_ordinal) const { return spec_.findings[finding_ordinal].leak; }

  /// Throws ValidationError(UnknownDisease / UnknownFinding) on miss.
  int disease_ordinal(std::string_view id) const;
  int finding_ordinal(std::string_view id) const;

  /// Diseases linked to a finding, in link file order.
  const std::vector<Arc>& finding_parents(int finding_ordinal) const {
    return parents_[finding_ordinal];
  }
  /// Findings linked to a disease, in link file order.
  const std::vector<Arc>& disease_children(int disease_ordinal) const {
    return children_[disease_ordinal];
  }

  /// Non-fatal oddities found during validation (currently: pure-leak
  /// findings with no linked disease, which carry no diagnostic signal).
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  Network() = default;

  NetworkSpec spec_;
  std::unordered_map<std::string, int> disease_index_;
  std::unordered_map<std::string, int> finding_index_;
  std::vector<std::vector<Arc>> parents_;
  std::vector<std::vector<Arc>> children_;
  std::vector<std::string> warnings_;
};

/// Case evidence resolved to ordinals against a network, sorted ascending.
struct BoundCase {
  std::string case_id;
  std::vector<int> positive;
  std::vector<int> negative;
  std::vector<int> gold;
};

/// Resolves ids and re-checks the evidence invariants against the network.
BoundCase bind_case(const Network& net, const CaseEvidence& evidence);

/// p(f_j- | D): the leak and every present linked disease must all have
/// failed to cause the finding.
double finding_absent_prob(const Network& net, int finding_ordinal, const DiseaseInstance& d);
double finding_absent_given_instance(const Network& net, std::string_view finding_id,
                                     const DiseaseInstance& d);

/// p(D): product of each disease's prior or complement per the assignment.
double instance_prior(const Network& net, const DiseaseInstance& d);

}  // namespace bn2o

#endif
