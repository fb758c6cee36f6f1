#pragma once

// Collaborative-filtering channel recommendation.
//
// Secondary users rate the channels they accessed by the number of slots they
// transmitted before the primary user returned. Channel scores average the
// ratings recorded in a recent time window; channels scoring above a
// threshold are recommended in descending score order.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specdec/channel_model.hpp"

namespace specdec {

struct AccessRecord {
  std::size_t su = 0;
  std::size_t channel = 0;
  std::size_t t = 0;
  std::uint32_t rating = 0;
};

/// Rating for an access: slots transmitted before the PU arrived, capped at K.
std::uint32_t score_access(std::size_t slots_transmitted, std::size_t K);

/// Append-only, time-ordered log of access ratings.
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t n_su, std::size_t n_channels, std::uint32_t max_rating);

  /// Throws ParameterError on out-of-range indices, a rating above the cap or
  /// a timestamp earlier than the last record.
  void append(const AccessRecord& record);

  std::span<const AccessRecord> records() const { return records_; }
  /// Records with t in [now - window, now), oldest first.
  std::span<const AccessRecord> window(std::size_t now, std::size_t window) const;

  std::size_t n_su() const { return n_su_; }
  std::size_t n_channels() const { return n_channels_; }
  std::uint32_t max_rating() const { return max_rating_; }

  /// Header `t,su,channel,rating`.
  void write_csv(std::ostream& out) const;

 private:
  std::size_t n_su_;
  std::size_t n_channels_;
  std::uint32_t max_rating_;
  std::vector<AccessRecord> records_;
};

/// Mean rating of `channel` over the records of the last `window` slots
/// before `now` (all users similar, sim = 1). Empty when no record falls in
/// the window.
std::optional<double> final_score(const ScoreMatrix& matrix, std::size_t channel, std::size_t now,
                                  std::size_t window);

/// Location-weighted variant for target user k: (1/Total) sum R_ij exp(-d_ik).
std::optional<double> final_score_located(const ScoreMatrix& matrix, std::size_t channel,
                                          std::size_t target, std::span<const SuLocation> locations,
                                          std::size_t now, std::size_t window);

/// Scores for every channel, indexed by channel.
std::vector<std::optional<double>> channel_scores(const ScoreMatrix& matrix, std::size_t now,
                                                  std::size_t window);
std::vector<std::optional<double>> channel_scores_located(const ScoreMatrix& matrix, std::size_t target,
                                                          std::span<const SuLocation> locations,
                                                          std::size_t now, std::size_t window);

struct Recommendation {
  std::size_t channel = 0;
  double score = 0.0;
};

struct RecommendationList {
  std::vector<Recommendation> entries;
  double threshold = 0.0;

  bool contains(std::size_t channel) const;
};

/// Channels with a defined score strictly above the threshold, by descending
/// score then ascending channel index. Without an explicit threshold, half the
/// best defined score is used.
RecommendationList recommend(std::span<const std::optional<double>> scores,
                             std::optional<double> threshold = std::nullopt);

enum class CfMode { mean, weighted, centered };

/// Generic neighbourhood rating prediction for user u on item i.
///
/// `ratings` is users x items with 0 meaning "not rated"; `similarities` is
/// parallel to `neighbors`. User means for the centred form average rated
/// items only. Throws UndefinedRating when the neighbour set is empty or the
/// similarity mass is zero.
double cf_predict(const Eigen::MatrixXd& ratings, std::size_t u, std::size_t i,
                  std::span<const std::size_t> neighbors, std::span<const double> similarities,
                  CfMode mode);

/// Mean of the non-zero ratings in row u; 0 when the user rated nothing.
double user_mean_rating(const Eigen::MatrixXd& ratings, std::size_t u);

}  // namespace specdec
