#include "stylo/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "stylo/digest.hpp"
#include "stylo/error.hpp"
#include "stylo/jsonl.hpp"
#include "stylo/kernels.hpp"

namespace stylo::verifier {

using nlohmann::json;

namespace {

void check_sample(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(ErrorKind::non_finite, std::string(name) + " contains a non-finite or negative distance");
    }
  }
}

}  // namespace

DistanceDistribution::DistanceDistribution(std::vector<double> same, std::vector<double> diff,
                                           distance::Metric metric, StoreMeta meta)
    : same_(std::move(same)), diff_(std::move(diff)), metric_(metric), meta_(std::move(meta)) {
  if (same_.empty() || diff_.empty()) {
    throw Error(ErrorKind::missing_label_class, "both same-author and different-author distances are required");
  }
  check_sample(same_, "same-author sample");
  check_sample(diff_, "different-author sample");
  std::sort(same_.begin(), same_.end());
  std::sort(diff_.begin(), diff_.end());
}

DistanceDistribution build(std::span<const LabeledDistance> distances, distance::Metric metric, StoreMeta meta) {
  std::vector<double> same;
  std::vector<double> diff;
  for (const auto& d : distances) (d.label == PairLabel::same_author ? same : diff).push_back(d.distance);
  return {std::move(same), std::move(diff), metric, std::move(meta)};
}

DistanceDistribution build(std::span<const LabeledVectors> pairs, distance::Metric metric, StoreMeta meta) {
  // The kernel works over indices into a pool of distinct vectors, keyed by address.
  std::vector<features::StyleVector> vectors;
  std::vector<kernels::IndexPair> index_pairs;
  std::vector<const features::StyleVector*> seen;
  auto index_of = [&](const features::StyleVector* v) {
    auto it = std::lower_bound(seen.begin(), seen.end(), v);
    return static_cast<std::uint32_t>(it - seen.begin());
  };
  for (const auto& p : pairs) {
    seen.push_back(p.a);
    seen.push_back(p.b);
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  vectors.reserve(seen.size());
  for (const auto* v : seen) vectors.push_back(*v);
  index_pairs.reserve(pairs.size());
  for (const auto& p : pairs) index_pairs.push_back({index_of(p.a), index_of(p.b)});

  const auto d = kernels::parallel::pair_distances(vectors, index_pairs, metric);
  std::vector<LabeledDistance> labeled;
  labeled.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) labeled.push_back({d[i], pairs[i].label});
  return build(labeled, metric, std::move(meta));
}

Scores score(const DistanceDistribution& dist, double d_star) {
  if (!std::isfinite(d_star)) throw Error(ErrorKind::non_finite, "query distance is not finite");
  const auto& same = dist.same_sorted();
  const auto& diff = dist.diff_sorted();
  const auto above = static_cast<double>(same.end() - std::upper_bound(same.begin(), same.end(), d_star));
  const auto below = static_cast<double>(std::lower_bound(diff.begin(), diff.end(), d_star) - diff.begin());
  return {above / static_cast<double>(same.size()), below / static_cast<double>(diff.size())};
}

Verdict decide(Scores s, double d_star) {
  Verdict v;
  v.s_prob = s.s_prob;
  v.d_prob = s.d_prob;
  v.distance = d_star;
  v.predicted = s.s_prob > s.d_prob ? PairLabel::same_author : PairLabel::different_author;
  const double m = std::max(s.s_prob, s.d_prob);
  v.confidence = m > 0.0 ? std::abs(s.s_prob - s.d_prob) / m : 0.0;
  return v;
}

Verdict classify(const DistanceDistribution& dist, const features::StyleVector& a,
                 const features::StyleVector& b) {
  const double d_star = distance::compute(dist.metric(), a, b);
  return decide(score(dist, d_star), d_star);
}

// ---- store file ----------------------------------------------------------

namespace {

json payload(const DistanceDistribution& dist) {
  return {{"metric", std::string(distance::to_string(dist.metric()))},
          {"alpha", dist.meta().alpha},
          {"vocab_hash", dist.meta().vocab_hash},
          {"same", dist.same_sorted()},
          {"diff", dist.diff_sorted()}};
}

std::string checksum(const json& payload) { return sha256_hex(payload.dump()); }

}  // namespace

std::string serialize(const DistanceDistribution& dist) {
  json j = payload(dist);
  j["checksum"] = checksum(j);
  j["version"] = kStoreVersion;
  j["n_same"] = dist.n_same();
  j["n_diff"] = dist.n_diff();
  return j.dump() + "\n";
}

DistanceDistribution deserialize(const std::string& contents) {
  json j;
  try {
    j = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::corrupt_store, std::string("store does not parse: ") + e.what());
  }
  try {
    if (!j.is_object()) throw Error(ErrorKind::corrupt_store, "store is not a JSON object");
    const auto& version = j.at("version");
    if (!version.is_number_integer()) throw Error(ErrorKind::corrupt_store, "store version is not an integer");
    if (version.get<int>() != kStoreVersion) {
      throw Error(ErrorKind::version_mismatch, "store version " + version.dump() + ", expected " +
                                                   std::to_string(kStoreVersion));
    }
    json p = {{"metric", j.at("metric")},
              {"alpha", j.at("alpha")},
              {"vocab_hash", j.at("vocab_hash")},
              {"same", j.at("same")},
              {"diff", j.at("diff")}};
    if (checksum(p) != j.at("checksum").get<std::string>()) {
      throw Error(ErrorKind::corrupt_store, "store checksum mismatch");
    }
    auto same = p["same"].get<std::vector<double>>();
    auto diff = p["diff"].get<std::vector<double>>();
    if (!std::is_sorted(same.begin(), same.end()) || !std::is_sorted(diff.begin(), diff.end())) {
      throw Error(ErrorKind::corrupt_store, "store arrays are not ascending");
    }
    StoreMeta meta{p["vocab_hash"].get<std::string>(), p["alpha"].get<double>()};
    return {std::move(same), std::move(diff), distance::parse_metric(p["metric"].get<std::string>()),
            std::move(meta)};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::corrupt_store, std::string("store is incomplete: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::version_mismatch || e.kind() == ErrorKind::corrupt_store) throw;
    throw Error(ErrorKind::corrupt_store, e.what());
  }
}

void save(const DistanceDistribution& dist, const std::filesystem::path& path) {
  jsonl::write_file(path, serialize(dist));
}

DistanceDistribution load(const std::filesystem::path& path) { return deserialize(jsonl::read_file(path)); }

std::optional<std::string> vocabulary_warning(const DistanceDistribution& dist, const std::string& vocab_hash) {
  if (dist.meta().vocab_hash == vocab_hash) return std::nullopt;
  return "store was built with vocabulary " + dist.meta().vocab_hash + " but the active vocabulary is " +
         vocab_hash;
}

}  // namespace stylo::verifier
