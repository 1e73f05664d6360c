#include "bn2o/network.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "bn2o/errors.hpp"

namespace bn2o {

Network Network::validate(NetworkSpec spec) {
  if (spec.diseases.empty() || spec.findings.empty()) {
    throw ValidationError(ErrorCode::EmptyNetwork,
                          "network needs at least one disease and one finding");
  }

  Network net;
  net.disease_index_.reserve(spec.diseases.size());
  for (std::size_t i = 0; i < spec.diseases.size(); ++i) {
    const DiseaseSpec& d = spec.diseases[i];
    if (!(d.prior > 0.0 && d.prior < 1.0)) {
      throw ValidationError(ErrorCode::ProbabilityOutOfRange,
                            "disease '" + d.id + "' prior must lie strictly in (0,1)");
    }
    if (!net.disease_index_.emplace(d.id, static_cast<int>(i)).second) {
      throw ValidationError(ErrorCode::DuplicateId, "disease id '" + d.id + "' repeats");
    }
  }

  net.finding_index_.reserve(spec.findings.size());
  for (std::size_t j = 0; j < spec.findings.size(); ++j) {
    const FindingSpec& f = spec.findings[j];
    if (!(f.leak >= 0.0 && f.leak < 1.0)) {
      throw ValidationError(ErrorCode::ProbabilityOutOfRange,
                            "finding '" + f.id + "' leak must lie in [0,1)");
    }
    if (!net.finding_index_.emplace(f.id, static_cast<int>(j)).second) {
      throw ValidationError(ErrorCode::DuplicateId, "finding id '" + f.id + "' repeats");
    }
  }

  net.parents_.resize(spec.findings.size());
  net.children_.resize(spec.diseases.size());
  std::set<std::pair<int, int>> seen_pairs;
  for (const CausalLink& link : spec.links) {
    const auto di = net.disease_index_.find(link.disease);
    if (di == net.disease_index_.end()) {
      throw ValidationError(ErrorCode::DanglingLink,
                            "link references unknown disease '" + link.disease + "'");
    }
    const auto fi = net.finding_index_.find(link.finding);
    if (fi == net.finding_index_.end()) {
      throw ValidationError(ErrorCode::DanglingLink,
                            "link references unknown finding '" + link.finding + "'");
    }
    if (!(link.q > 0.0 && link.q <= 1.0)) {
      throw ValidationError(ErrorCode::ProbabilityOutOfRange,
                            "link (" + link.disease + ", " + link.finding +
                                ") q must lie in (0,1]; drop the link instead of q=0");
    }
    if (!seen_pairs.emplace(di->second, fi->second).second) {
      throw ValidationError(ErrorCode::DuplicateId, "duplicate link (" + link.disease + ", " +
                                                        link.finding + ")");
    }
    net.parents_[fi->second].push_back({di->second, link.q});
    net.children_[di->second].push_back({fi->second, link.q});
  }

  for (std::size_t j = 0; j < spec.findings.size(); ++j) {
    if (net.parents_[j].empty()) {
      net.warnings_.push_back("finding '" + spec.findings[j].id +
                              "' has no linked diseases (pure leak, carries no signal)");
    }
  }

  net.spec_ = std::move(spec);
  return net;
}

int Network::disease_ordinal(std::string_view id) const {
  const auto it = disease_index_.find(std::string(id));
  if (it == disease_index_.end()) {
    throw ValidationError(ErrorCode::UnknownDisease, "no disease '" + std::string(id) + "'");
  }
  return it->second;
}

int Network::finding_ordinal(std::string_view id) const {
  const auto it = finding_index_.find(std::string(id));
  if (it == finding_index_.end()) {
    throw ValidationError(ErrorCode::UnknownFinding, "no finding '" + std::string(id) + "'");
  }
  return it->second;
}

BoundCase bind_case(const Network& net, const CaseEvidence& evidence) {
  BoundCase bound;
  bound.case_id = evidence.case_id;
  bound.positive.reserve(evidence.positive.size());
  for (const std::string& id : evidence.positive) bound.positive.push_back(net.finding_ordinal(id));
  bound.negative.reserve(evidence.negative.size());
  for (const std::string& id : evidence.negative) bound.negative.push_back(net.finding_ordinal(id));
  bound.gold.reserve(evidence.gold.size());
  for (const std::string& id : evidence.gold) bound.gold.push_back(net.disease_ordinal(id));

  std::sort(bound.positive.begin(), bound.positive.end());
  std::sort(bound.negative.begin(), bound.negative.end());
  std::sort(bound.gold.begin(), bound.gold.end());

  const auto check_unique = [&](const std::vector<int>& v, const char* what) {
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
      throw ValidationError(ErrorCode::DuplicateId,
                            std::string("case '") + evidence.case_id + "' repeats a " + what);
    }
  };
  check_unique(bound.positive, "positive finding");
  check_unique(bound.negative, "negative finding");
  check_unique(bound.gold, "gold disease");

  std::vector<int> overlap;
  std::set_intersection(bound.positive.begin(), bound.positive.end(), bound.negative.begin(),
                        bound.negative.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw ValidationError(ErrorCode::EvidenceOverlap,
                          "case '" + evidence.case_id + "': finding '" +
                              net.finding(overlap.front()).id +
                              "' observed both positive and negative");
  }
  return bound;
}

double finding_absent_prob(const Network& net, int finding_ordinal, const DiseaseInstance& d) {
  if (d.present.size() != static_cast<std::size_t>(net.n_diseases())) {
    throw ValidationError(ErrorCode::IncompleteInstance,
                          "instance must assign every disease in the network");
  }
  double prob = 1.0 - net.leak(finding_ordinal);
  for (const Network::Arc& arc : net.finding_parents(finding_ordinal)) {
    if (d.present[arc.ordinal]) prob *= 1.0 - arc.q;
  }
  return prob;
}

double finding_absent_given_instance(const Network& net, std::string_view finding_id,
                                     const DiseaseInstance& d) {
  return finding_absent_prob(net, net.finding_ordinal(finding_id), d);
}

double instance_prior(const Network& net, const DiseaseInstance& d) {
  if (d.present.size() != static_cast<std::size_t>(net.n_diseases())) {
    throw ValidationError(ErrorCode::IncompleteInstance,
                          "instance must assign every disease in the network");
  }
  double prob = 1.0;
  for (int i = 0; i < net.n_diseases(); ++i) {
    prob *= d.present[i] ? net.prior(i) : 1.0 - net.prior(i);
  }
  return prob;
}

}  // namespace bn2o
