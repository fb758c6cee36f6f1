#include "specdec/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

void check_row(const Eigen::Ref<const Eigen::RowVectorXd>& row, double tol, const char* what) {
  if ((row.array() < 0.0).any() || !row.allFinite())
    throw ParameterError(std::string("HmmModel: negative or non-finite entry in ") + what);
  if (std::abs(row.sum() - 1.0) > tol)
    throw ParameterError(std::string("HmmModel: row of ") + what + " does not sum to 1");
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

std::size_t argmax_low(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  std::size_t best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j)
    if (row(j) > row(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(j);
  return best;
}

}  // namespace

void HmmModel::validate(double tol) const {
  const auto n = transition.rows();
  if (n < 1 || transition.cols() != n || initial.size() != n || emission.rows() != n ||
      emission.cols() < 1)
    throw ParameterError("HmmModel: inconsistent dimensions");
  check_row(initial.transpose(), tol, "pi");
  for (Eigen::Index i = 0; i < n; ++i) {
    check_row(transition.row(i), tol, "A");
    check_row(emission.row(i), tol, "B");
  }
}

HmmModel hmm_fit(std::span<const SlotState> trace, std::size_t n_states, double smoothing) {
  if (n_states != 2) throw ParameterError("hmm_fit: only two hidden states are supported");
  if (trace.size() < 2) throw ParameterError("hmm_fit: trace needs at least two slots");
  if (!(smoothing >= 0.0)) throw ParameterError("hmm_fit: smoothing must be non-negative");

  Eigen::Matrix2d counts = Eigen::Matrix2d::Constant(smoothing);
  Eigen::Vector2d freq = Eigen::Vector2d::Constant(smoothing);
  for (std::size_t t = 0; t < trace.size(); ++t) {
    freq(to_bit(trace[t])) += 1.0;
    if (t + 1 < trace.size()) counts(to_bit(trace[t]), to_bit(trace[t + 1])) += 1.0;
  }

  HmmModel model;
  model.transition = Eigen::MatrixXd(2, 2);
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double total = counts.row(i).sum();
    model.transition.row(i) =
        total > 0.0 ? Eigen::RowVector2d(counts.row(i) / total) : Eigen::RowVector2d(0.5, 0.5);
  }
  model.initial = freq / freq.sum();
  model.emission = Eigen::MatrixXd(2, 2);
  model.emission << 1.0 - smoothing, smoothing, smoothing, 1.0 - smoothing;
  return model;
}

std::size_t hmm_viterbi_last_state(const HmmModel& model, std::span<const SlotState> observations) {
  if (observations.empty()) throw ParameterError("hmm_predict: empty observation sequence");
  const auto n = static_cast<Eigen::Index>(model.n_states());
  const auto symbols = static_cast<Eigen::Index>(model.n_symbols());
  auto symbol = [&](SlotState o) {
    const auto k = static_cast<Eigen::Index>(to_bit(o));
    if (k >= symbols) throw ParameterError("hmm_predict: observation outside the symbol set");
    return k;
  };

  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<double> next(delta.size());
  const auto o1 = symbol(observations[0]);
  for (Eigen::Index i = 0; i < n; ++i)
    delta[static_cast<std::size_t>(i)] = safe_log(model.initial(i)) + safe_log(model.emission(i, o1));

  for (std::size_t t = 1; t < observations.size(); ++t) {
    const auto ot = symbol(observations[t]);
    for (Eigen::Index j = 0; j < n; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i)
        best = std::max(best, delta[static_cast<std::size_t>(i)] + safe_log(model.transition(i, j)));
      next[static_cast<std::size_t>(j)] = best + safe_log(model.emission(j, ot));
    }
    delta.swap(next);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < delta.size(); ++i)
    if (delta[i] > delta[best]) best = i;
  return best;
}

SlotState hmm_predict(const HmmModel& model, std::span<const SlotState> observations) {
  if (model.n_states() != 2) throw ParameterError("hmm_predict: hidden states must map to idle/busy");
  const std::size_t q = hmm_viterbi_last_state(model, observations);
  const std::size_t next = argmax_low(model.transition.row(static_cast<Eigen::Index>(q)));
  return from_bit(next != 0);
}

}  // namespace specdec
