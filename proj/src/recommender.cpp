#include "specdec/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "specdec/errors.hpp"

namespace specdec {

std::uint32_t score_access(std::size_t slots_transmitted, std::size_t K) {
  return static_cast<std::uint32_t>(std::min(slots_transmitted, K));
}

ScoreMatrix::ScoreMatrix(std::size_t n_su, std::size_t n_channels, std::uint32_t max_rating)
    : n_su_(n_su), n_channels_(n_channels), max_rating_(max_rating) {}

void ScoreMatrix::append(const AccessRecord& record) {
  if (record.su >= n_su_ || record.channel >= n_channels_)
    throw ParameterError("ScoreMatrix: record index out of range");
  if (record.rating > max_rating_) throw ParameterError("ScoreMatrix: rating above the cap");
  if (!records_.empty() && record.t < records_.back().t)
    throw ParameterError("ScoreMatrix: records must be appended in time order");
  records_.push_back(record);
}

std::span<const AccessRecord> ScoreMatrix::window(std::size_t now, std::size_t window) const {
  const std::size_t from = now >= window ? now - window : 0;
  auto by_time = [](const AccessRecord& r, std::size_t t) { return r.t < t; };
  const auto lo = std::lower_bound(records_.begin(), records_.end(), from, by_time);
  const auto hi = std::lower_bound(lo, records_.end(), now, by_time);
  return {lo, hi};
}

void ScoreMatrix::write_csv(std::ostream& out) const {
  out << "t,su,channel,rating\n";
  for (const auto& r : records_) out << r.t << ',' << r.su << ',' << r.channel << ',' << r.rating << '\n';
}

std::optional<double> final_score(const ScoreMatrix& matrix, std::size_t channel, std::size_t now,
                                  std::size_t window) {
  if (window < 1) throw ParameterError("final_score: window must be at least 1");
  double sum = 0.0;
  std::size_t total = 0;
  for (const auto& r : matrix.window(now, window)) {
    if (r.channel != channel) continue;
    sum += r.rating;
    ++total;
  }
  if (total == 0) return std::nullopt;
  return sum / static_cast<double>(total);
}

std::optional<double> final_score_located(const ScoreMatrix& matrix, std::size_t channel,
                                          std::size_t target, std::span<const SuLocation> locations,
                                          std::size_t now, std::size_t window) {
  if (window < 1) throw ParameterError("final_score_located: window must be at least 1");
  if (target >= locations.size() || locations.size() < matrix.n_su())
    throw ParameterError("final_score_located: missing user locations");
  double sum = 0.0;
  std::size_t total = 0;
  for (const auto& r : matrix.window(now, window)) {
    if (r.channel != channel) continue;
    sum += r.rating * std::exp(-distance(locations[r.su], locations[target]));
    ++total;
  }
  if (total == 0) return std::nullopt;
  return sum / static_cast<double>(total);
}

std::vector<std::optional<double>> channel_scores(const ScoreMatrix& matrix, std::size_t now,
                                                  std::size_t window) {
  std::vector<std::optional<double>> scores(matrix.n_channels());
  for (std::size_t j = 0; j < scores.size(); ++j) scores[j] = final_score(matrix, j, now, window);
  return scores;
}

std::vector<std::optional<double>> channel_scores_located(const ScoreMatrix& matrix, std::size_t target,
                                                          std::span<const SuLocation> locations,
                                                          std::size_t now, std::size_t window) {
  std::vector<std::optional<double>> scores(matrix.n_channels());
  for (std::size_t j = 0; j < scores.size(); ++j)
    scores[j] = final_score_located(matrix, j, target, locations, now, window);
  return scores;
}

bool RecommendationList::contains(std::size_t channel) const {
  return std::any_of(entries.begin(), entries.end(),
                     [channel](const Recommendation& r) { return r.channel == channel; });
}

RecommendationList recommend(std::span<const std::optional<double>> scores,
                             std::optional<double> threshold) {
  if (threshold && !std::isfinite(*threshold)) throw ParameterError("recommend: threshold must be finite");
  RecommendationList list;
  std::optional<double> best;
  for (const auto& s : scores)
    if (s && (!best || *s > *best)) best = s;
  if (!best) {
    list.threshold = threshold.value_or(0.0);
    return list;
  }
  list.threshold = threshold.value_or(*best / 2.0);
  for (std::size_t j = 0; j < scores.size(); ++j)
    if (scores[j] && *scores[j] > list.threshold) list.entries.push_back({j, *scores[j]});
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const Recommendation& a, const Recommendation& b) { return a.score > b.score; });
  return list;
}

double user_mean_rating(const Eigen::MatrixXd& ratings, std::size_t u) {
  if (u >= static_cast<std::size_t>(ratings.rows())) throw ParameterError("user_mean_rating: bad user");
  double sum = 0.0;
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < ratings.cols(); ++j) {
    const double r = ratings(static_cast<Eigen::Index>(u), j);
    if (r != 0.0) {
      sum += r;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double cf_predict(const Eigen::MatrixXd& ratings, std::size_t u, std::size_t i,
                  std::span<const std::size_t> neighbors, std::span<const double> similarities,
                  CfMode mode) {
  const auto rows = static_cast<std::size_t>(ratings.rows());
  if (u >= rows || i >= static_cast<std::size_t>(ratings.cols()))
    throw ParameterError("cf_predict: user or item out of range");
  if (neighbors.empty()) throw UndefinedRating("cf_predict: empty neighbour set");
  for (const auto v : neighbors)
    if (v >= rows) throw ParameterError("cf_predict: neighbour out of range");
  auto rating = [&](std::size_t v) {
    return ratings(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(i));
  };

  if (mode == CfMode::mean) {
    double sum = 0.0;
    for (const auto v : neighbors) sum += rating(v);
    return sum / static_cast<double>(neighbors.size());
  }

  if (similarities.size() != neighbors.size())
    throw ParameterError("cf_predict: one similarity per neighbour required");
  double mass = 0.0;
  for (const double s : similarities) mass += std::abs(s);
  if (!(mass > 0.0)) throw UndefinedRating("cf_predict: zero similarity mass");

  double sum = 0.0;
  for (std::size_t k = 0; k < neighbors.size(); ++k) {
    const std::size_t v = neighbors[k];
    const double centred = mode == CfMode::centered ? rating(v) - user_mean_rating(ratings, v) : rating(v);
    sum += similarities[k] * centred;
  }
  const double base = mode == CfMode::centered ? user_mean_rating(ratings, u) : 0.0;
  return sum / mass + base;
}

}  // namespace specdec
