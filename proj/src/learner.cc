// Copyright 2026 The sdnfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sdnfuzz/learner.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "sdnfuzz/error.h"
#include "sdnfuzz/kernels.h"
#include "sdnfuzz/rng.h"
#include "text_util.h"

namespace sdnfuzz {

double ConfidenceScore(std::size_t t, std::size_t f) {
  if (t == 0) return 0.0;
  return static_cast<double>(t - f) / static_cast<double>(t);
}

void DecisionRule::Annotate(std::size_t matched, std::size_t mismatched) {
  t = matched;
  f = mismatched;
  confidence = ConfidenceScore(t, f);
}

namespace {

using Mask = std::vector<std::uint8_t>;

struct RAtom {
  std::size_t feature;
  Op op;
  std::uint64_t constant;
};
using RRule = std::vector<RAtom>;

double Log2(double x) { return std::log2(x); }

// Bits needed to identify k elements of a t-element set when each is a member
// with probability p.
double SubsetDL(double t, double k, double p) {
  constexpr double kEps = 1e-12;
  p = std::clamp(p, kEps, 1.0 - kEps);
  double bits = 0.0;
  if (k > 0) bits -= k * Log2(p);
  if (t - k > 0) bits -= (t - k) * Log2(1.0 - p);
  return bits;
}

class Ripper {
 public:
  Ripper(const LabeledDataset& data, Label positive, const LearnerParams& params)
      : data_(data),
        n_(data.size()),
        params_(params),
        rng_(MakeRng(params.seed, {0x5249505045ULL})) {
    pos_.resize(n_);
    const auto want = static_cast<std::uint8_t>(positive);
    for (std::size_t r = 0; r < n_; ++r)
      pos_[r] = data.presence()[r] == want ? 1 : 0;
    total_pos_ = static_cast<std::size_t>(std::count(pos_.begin(), pos_.end(), 1));

    order_.resize(data.field_count());
    num_all_conds_ = 0.0;
    for (std::size_t j = 0; j < data.field_count(); ++j) {
      auto col = data.column(j);
      auto& ord = order_[j];
      ord.resize(n_);
      std::iota(ord.begin(), ord.end(), 0);
      std::stable_sort(ord.begin(), ord.end(),
                       [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
      std::size_t distinct = n_ ? 1 : 0;
      for (std::size_t k = 1; k < n_; ++k)
        if (col[ord[k]] != col[ord[k - 1]]) ++distinct;
      num_all_conds_ += 2.0 * static_cast<double>(distinct);
    }
    num_all_conds_ = std::max(num_all_conds_, 1.0);
    exp_fp_rate_ = static_cast<double>(total_pos_) / static_cast<double>(n_);
  }

  std::vector<RRule> Run() {
    std::vector<RRule> rules;
    AddRules(rules);
    for (int pass = 0; pass < params_.optimization_passes; ++pass) {
      Optimize(rules);
      AddRules(rules);
      ReduceDL(rules);
    }
    for (auto& r : rules) Simplify(r);
    return rules;
  }

 private:
  Mask All() const { return Mask(n_, 1); }

  Mask Cover(const RRule& rule, const Mask& within) const {
    Mask m = within;
    for (const auto& a : rule)
      kernels::FilterColumn(data_.column(a.feature), a.op, a.constant, m);
    return m;
  }

  kernels::Coverage Count(const Mask& m) const {
    return kernels::CountCovered(m, pos_);
  }

  Mask CoverAny(const std::vector<RRule>& rules, std::size_t begin,
                std::size_t end, const Mask& within) const {
    Mask any(n_, 0);
    for (std::size_t i = begin; i < end; ++i) {
      Mask m = Cover(rules[i], within);
      for (std::size_t r = 0; r < n_; ++r) any[r] |= m[r];
    }
    return any;
  }

  static Mask AndNot(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r] & (b[r] ^ 1);
    return out;
  }

  // Stratified split of `within` into grow and prune parts.
  std::pair<Mask, Mask> Split(const Mask& within) {
    std::vector<std::size_t> p, q;
    for (std::size_t r = 0; r < n_; ++r) {
      if (!within[r]) continue;
      (pos_[r] ? p : q).push_back(r);
    }
    Mask grow(n_, 0), prune(n_, 0);
    for (auto* part : {&p, &q}) {
      std::shuffle(part->begin(), part->end(), rng_);
      const auto take = static_cast<std::size_t>(
          std::ceil(params_.grow_fraction * static_cast<double>(part->size())));
      for (std::size_t k = 0; k < part->size(); ++k)
        ((k < take) ? grow : prune)[(*part)[k]] = 1;
    }
    return {grow, prune};
  }

  // Adds atoms to `rule` by FOIL information gain until it covers no negative
  // of the grow set or no atom has positive gain.
  RRule Grow(RRule rule, const Mask& grow) const {
    Mask covered = Cover(rule, grow);
    while (true) {
      const auto c = Count(covered);
      const double P = static_cast<double>(c.positives);
      const double N = static_cast<double>(c.covered - c.positives);
      if (c.positives == 0 || N == 0) break;
      const double base = Log2(P / (P + N));

      double best_gain = 0.0;
      std::optional<RAtom> best;
      for (std::size_t j = 0; j < data_.field_count(); ++j) {
        auto col = data_.column(j);
        // Walk covered rows in value order, one group per distinct value.
        double cum_p = 0, cum_n = 0;
        bool have_prev = false;
        std::uint64_t prev = 0;
        for (std::size_t r : order_[j]) {
          if (!covered[r]) continue;
          const std::uint64_t v = col[r];
          if (have_prev && v != prev) {
            const std::uint64_t mid = prev + (v - prev) / 2;
            Consider(j, Op::kLe, mid, cum_p, cum_n, base, best_gain, best);
            Consider(j, Op::kGe, mid + 1, P - cum_p, N - cum_n, base, best_gain,
                     best);
          }
          (pos_[r] ? cum_p : cum_n) += 1;
          prev = v;
          have_prev = true;
        }
      }
      if (!best) break;
      rule.push_back(*best);
      kernels::FilterColumn(data_.column(best->feature), best->op,
                            best->constant, covered);
    }
    return rule;
  }

  void Consider(std::size_t feature, Op op, std::uint64_t constant, double p,
                double n, double base, double& best_gain,
                std::optional<RAtom>& best) const {
    if (p < static_cast<double>(params_.min_coverage) || p <= 0) return;
    const double gain = p * (Log2(p / (p + n)) - base);
    if (gain > best_gain + 1e-12) {
      best_gain = gain;
      best = RAtom{feature, op, constant};
    }
  }

  // Keeps the prefix maximising (p - n) / (p + n) on the prune set; shorter
  // prefixes win ties.
  RRule PruneRule(const RRule& rule, const Mask& prune) const {
    if (rule.empty()) return rule;
    std::size_t best_len = rule.size();
    double best_val = -std::numeric_limits<double>::infinity();
    Mask m = prune;
    for (std::size_t len = 1; len <= rule.size(); ++len) {
      const auto& a = rule[len - 1];
      kernels::FilterColumn(data_.column(a.feature), a.op, a.constant, m);
      const auto c = Count(m);
      const double p = static_cast<double>(c.positives);
      const double nn = static_cast<double>(c.covered - c.positives);
      const double val = (p + nn) > 0 ? (p - nn) / (p + nn) : 0.0;
      if (val > best_val + 1e-12) {
        best_val = val;
        best_len = len;
      }
    }
    return RRule(rule.begin(), rule.begin() + static_cast<long>(best_len));
  }

  // Keeps the prefix maximising the accuracy on `prune` of the rule list in
  // which this rule is followed by rules covering `later`.
  RRule PruneInContext(const RRule& rule, const Mask& prune,
                       const Mask& later) const {
    if (rule.empty()) return rule;
    std::size_t best_len = rule.size();
    double best_acc = -1.0;
    Mask m = prune;
    for (std::size_t len = 1; len <= rule.size(); ++len) {
      const auto& a = rule[len - 1];
      kernels::FilterColumn(data_.column(a.feature), a.op, a.constant, m);
      std::size_t correct = 0, total = 0;
      for (std::size_t r = 0; r < n_; ++r) {
        if (!prune[r]) continue;
        ++total;
        const bool predicted = m[r] || later[r];
        correct += (predicted == static_cast<bool>(pos_[r]));
      }
      const double acc = total ? static_cast<double>(correct) / total : 0.0;
      if (acc > best_acc + 1e-12) {
        best_acc = acc;
        best_len = len;
      }
    }
    return RRule(rule.begin(), rule.begin() + static_cast<long>(best_len));
  }

  double TheoryDL(const RRule& rule) const {
    const double k = static_cast<double>(rule.size());
    if (k == 0) return 0.0;
    double kbits = Log2(k);
    if (k > 1) kbits += 2.0 * Log2(kbits);
    return 0.5 * (kbits + SubsetDL(num_all_conds_, k, k / num_all_conds_));
  }

  double DataDL(double cover, double uncover, double fp, double fn) const {
    const double total_bits = Log2(cover + uncover + 1.0);
    double cover_bits, uncover_bits;
    if (cover > uncover) {
      const double exp_err = exp_fp_rate_ * (fp + fn);
      cover_bits = SubsetDL(cover, fp, exp_err / cover);
      uncover_bits = uncover > 0 ? SubsetDL(uncover, fn, fn / uncover) : 0.0;
    } else {
      const double exp_err = (1.0 - exp_fp_rate_) * (fp + fn);
      cover_bits = cover > 0 ? SubsetDL(cover, fp, fp / cover) : 0.0;
      uncover_bits = uncover > 0 ? SubsetDL(uncover, fn, exp_err / uncover) : 0.0;
    }
    return total_bits + cover_bits + uncover_bits;
  }

  double RulesetDL(const std::vector<RRule>& rules) const {
    double dl = 0.0;
    for (const auto& r : rules) dl += TheoryDL(r);
    const Mask any = CoverAny(rules, 0, rules.size(), All());
    const auto c = Count(any);
    const double cover = static_cast<double>(c.covered);
    const double fp = static_cast<double>(c.covered - c.positives);
    const double fn = static_cast<double>(total_pos_ - c.positives);
    return dl + DataDL(cover, static_cast<double>(n_) - cover, fp, fn);
  }

  // IREP*: covers remaining positives one rule at a time.
  void AddRules(std::vector<RRule>& rules) {
    Mask uncovered = AndNot(All(), CoverAny(rules, 0, rules.size(), All()));
    double min_dl = RulesetDL(rules);
    while (Count(uncovered).positives > 0) {
      auto [grow, prune] = Split(uncovered);
      if (Count(grow).positives == 0) break;
      RRule rule = Grow({}, grow);
      if (rule.empty()) break;
      rule = PruneRule(rule, prune);
      const auto pc = Count(Cover(rule, prune));
      if (pc.covered > 0 &&
          static_cast<double>(pc.covered - pc.positives) / pc.covered >= 0.5)
        break;
      rules.push_back(rule);
      const double dl = RulesetDL(rules);
      if (dl > min_dl + params_.max_dl_surplus) {
        rules.pop_back();
        break;
      }
      min_dl = std::min(min_dl, dl);
      uncovered = AndNot(uncovered, Cover(rule, All()));
    }
  }

  void Optimize(std::vector<RRule>& rules) {
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Mask within = AndNot(All(), CoverAny(rules, 0, i, All()));
      auto [grow, prune] = Split(within);
      const Mask later = CoverAny(rules, i + 1, rules.size(), prune);

      std::vector<RRule> candidates;
      RRule replacement = Grow({}, grow);
      if (!replacement.empty())
        candidates.push_back(PruneInContext(replacement, prune, later));
      RRule revision = Grow(rules[i], grow);
      candidates.push_back(PruneInContext(revision, prune, later));

      double best_dl = RulesetDL(rules);
      RRule best = rules[i];
      for (auto& cand : candidates) {
        auto trial = rules;
        trial[i] = cand;
        const double dl = RulesetDL(trial);
        if (dl < best_dl - 1e-9) {
          best_dl = dl;
          best = cand;
        }
      }
      rules[i] = std::move(best);
    }
  }

  // Drops rules whose removal lowers the total description length.
  void ReduceDL(std::vector<RRule>& rules) const {
    for (std::size_t i = rules.size(); i-- > 0;) {
      auto without = rules;
      without.erase(without.begin() + static_cast<long>(i));
      if (RulesetDL(without) < RulesetDL(rules) - 1e-9) rules = std::move(without);
    }
  }

  // Keeps the tightest bound per (feature, direction); first-appearance order.
  static void Simplify(RRule& rule) {
    RRule out;
    for (const auto& a : rule) {
      auto it = std::find_if(out.begin(), out.end(), [&](const RAtom& b) {
        return b.feature == a.feature && b.op == a.op;
      });
      if (it == out.end()) {
        out.push_back(a);
      } else if (a.op == Op::kLe) {
        it->constant = std::min(it->constant, a.constant);
      } else if (a.op == Op::kGe) {
        it->constant = std::max(it->constant, a.constant);
      } else {
        out.push_back(a);
      }
    }
    rule = std::move(out);
  }

  const LabeledDataset& data_;
  std::size_t n_;
  LearnerParams params_;
  Rng rng_;
  Mask pos_;
  std::size_t total_pos_ = 0;
  std::vector<std::vector<std::size_t>> order_;
  double num_all_conds_ = 1.0;
  double exp_fp_rate_ = 0.5;
};

}  // namespace

RuleSet::RuleSet(std::vector<DecisionRule> minority_rules, DecisionRule default_rule)
    : minority_rules_(std::move(minority_rules)),
      default_rule_(std::move(default_rule)) {}

int RuleSet::FiringRule(const FieldMap& values) const {
  int firing = -1;
  // Validate every referenced field, not just those of the first match.
  for (std::size_t i = 0; i < minority_rules_.size(); ++i) {
    const bool holds = Evaluate(minority_rules_[i].condition, values);
    if (holds && firing < 0) firing = static_cast<int>(i);
  }
  return firing;
}

Label RuleSet::Classify(const FieldMap& values) const {
  const int i = FiringRule(values);
  return i >= 0 ? minority_rules_[static_cast<std::size_t>(i)].prediction
                : default_rule_.prediction;
}

std::vector<std::uint8_t> RuleSet::ClassifyAll(const LabeledDataset& data) const {
  const std::size_t n = data.size();
  std::vector<std::uint8_t> fired(n, 0);
  for (const auto& rule : minority_rules_) {
    BoundCondition bound(rule.condition, data.field_names());
    std::vector<std::uint8_t> m(n, 1);
    for (const auto& a : bound.atoms())
      kernels::FilterColumn(data.column(a.index), a.op, a.constant, m);
    for (std::size_t r = 0; r < n; ++r) fired[r] |= m[r];
  }
  const auto minority = static_cast<std::uint8_t>(minority_class());
  const auto majority = static_cast<std::uint8_t>(majority_class());
  std::vector<std::uint8_t> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = fired[r] ? minority : majority;
  return out;
}

void RuleSet::AnnotateOn(const LabeledDataset& data) {
  const std::size_t n = data.size();
  std::vector<std::uint8_t> none(n, 1);
  for (auto& rule : minority_rules_) {
    BoundCondition bound(rule.condition, data.field_names());
    std::vector<std::uint8_t> m(n, 1);
    for (const auto& a : bound.atoms())
      kernels::FilterColumn(data.column(a.index), a.op, a.constant, m);
    std::size_t t = 0, f = 0;
    const auto want = static_cast<std::uint8_t>(rule.prediction);
    for (std::size_t r = 0; r < n; ++r) {
      if (!m[r]) continue;
      ++t;
      f += data.presence()[r] != want;
      none[r] = 0;
    }
    rule.Annotate(t, f);
  }
  std::size_t t = 0, f = 0;
  const auto want = static_cast<std::uint8_t>(default_rule_.prediction);
  for (std::size_t r = 0; r < n; ++r) {
    if (!none[r]) continue;
    ++t;
    f += data.presence()[r] != want;
  }
  default_rule_.Annotate(t, f);
}

namespace {

std::string StatsText(const DecisionRule& r) {
  return "(t=" + std::to_string(r.t) + ", f=" + std::to_string(r.f) +
         ", confidence=" + text_util::FormatDouble(r.confidence) + ")";
}

// Parses "class=<label>" optionally followed by "(t=.., f=.., confidence=..)".
void ParseTail(std::string_view tail, DecisionRule& rule) {
  tail = text_util::Trim(tail);
  if (!tail.starts_with("class="))
    throw Error(Errc::kParse, "expected class=<label> in '" + std::string(tail) + "'");
  tail.remove_prefix(6);
  const auto sp = tail.find_first_of(" (");
  rule.prediction = ParseLabel(tail.substr(0, sp));
  if (sp == std::string_view::npos) {
    rule.t = rule.f = 0;
    rule.confidence = 0.0;
    return;
  }
  auto stats = text_util::Trim(tail.substr(sp));
  if (stats.empty()) return;
  if (stats.front() != '(' || stats.back() != ')')
    throw Error(Errc::kParse, "malformed rule statistics '" + std::string(stats) + "'");
  stats = stats.substr(1, stats.size() - 2);
  bool seen_t = false, seen_f = false, seen_c = false;
  while (!stats.empty()) {
    const auto comma = stats.find(',');
    auto item = text_util::Trim(stats.substr(0, comma));
    stats = comma == std::string_view::npos ? std::string_view{} : stats.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::kParse, "malformed statistic '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto val = item.substr(eq + 1);
    if (key == "t") {
      rule.t = text_util::ParseU64(val);
      seen_t = true;
    } else if (key == "f") {
      rule.f = text_util::ParseU64(val);
      seen_f = true;
    } else if (key == "confidence") {
      rule.confidence = text_util::ParseDouble(val);
      seen_c = true;
    } else {
      throw Error(Errc::kParse, "unknown statistic '" + std::string(key) + "'");
    }
  }
  if (!seen_t || !seen_f) throw Error(Errc::kParse, "rule statistics need t and f");
  if (!seen_c) rule.confidence = ConfidenceScore(rule.t, rule.f);
}

}  // namespace

std::string RuleSet::ToText() const {
  std::string out;
  for (const auto& r : minority_rules_) {
    out += "IF " + FormatCondition(r.condition) + " THEN class=" +
           std::string(LabelName(r.prediction)) + " " + StatsText(r) + "\n";
  }
  out += "ELSE class=" + std::string(LabelName(default_rule_.prediction)) + " " +
         StatsText(default_rule_) + "\n";
  return out;
}

RuleSet RuleSet::FromText(std::string_view text) {
  std::vector<DecisionRule> rules;
  std::optional<DecisionRule> fallback;
  std::size_t start = 0, lineno = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text_util::Trim(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (fallback)
      throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": text after ELSE");
    if (line.starts_with("IF ")) {
      const auto then = line.find(" THEN ");
      if (then == std::string_view::npos)
        throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": missing THEN");
      DecisionRule rule;
      rule.condition = ParseCondition(line.substr(3, then - 3));
      ParseTail(line.substr(then + 6), rule);
      rules.push_back(std::move(rule));
    } else if (line.starts_with("ELSE ")) {
      DecisionRule rule;
      ParseTail(line.substr(5), rule);
      fallback = std::move(rule);
    } else {
      throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": expected IF or ELSE");
    }
  }
  if (!fallback) throw Error(Errc::kParse, "rule set has no ELSE line");
  for (const auto& r : rules)
    if (r.prediction == fallback->prediction)
      throw Error(Errc::kParse, "rule predicts the default class");
  return RuleSet(std::move(rules), std::move(*fallback));
}

void RuleSet::WriteFile(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << ToText();
  if (!out) throw Error(Errc::kPersistence, "cannot write " + path.string());
}

RuleSet RuleSet::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kPersistence, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromText(ss.str());
}

RuleSet Learn(const LabeledDataset& data, const LearnerParams& params) {
  const std::size_t presence = data.count(Label::kPresence);
  const std::size_t absence = data.size() - presence;
  // Ties make presence the minority: failures are the class of interest.
  const Label minority = presence <= absence ? Label::kPresence : Label::kAbsence;

  DecisionRule default_rule;
  if (data.size() < 2 || presence == 0 || absence == 0) {
    default_rule.prediction =
        presence > absence ? Label::kPresence : Label::kAbsence;
    RuleSet degenerate({}, default_rule);
    degenerate.AnnotateOn(data);
    return degenerate;
  }

  Ripper ripper(data, minority, params);
  const auto raw = ripper.Run();
  std::vector<DecisionRule> rules;
  rules.reserve(raw.size());
  for (const auto& r : raw) {
    DecisionRule rule;
    rule.prediction = minority;
    for (const auto& a : r)
      rule.condition.atoms.push_back({data.field_names()[a.feature], a.op, a.constant});
    rules.push_back(std::move(rule));
  }
  default_rule.prediction = Other(minority);
  RuleSet out(std::move(rules), default_rule);
  out.AnnotateOn(data);
  return out;
}

Metrics Score(std::span<const std::uint8_t> actual,
              std::span<const std::uint8_t> predicted) {
  Metrics m;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const bool a = actual[i] != 0, p = predicted[i] != 0;
    if (a && p) ++m.tp;
    else if (!a && p) ++m.fp;
    else if (a && !p) ++m.fn;
    else ++m.tn;
  }
  m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
  m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
  return m;
}

Metrics CrossValidate(const LabeledDataset& data, int k,
                      const LearnerParams& params) {
  if (k < 2) throw Error(Errc::kTooFewSamples, "fold count must be at least 2");
  if (data.size() < static_cast<std::size_t>(k))
    throw Error(Errc::kTooFewSamples, std::to_string(data.size()) +
                                          " samples for " + std::to_string(k) +
                                          " folds");
  Rng rng = MakeRng(params.seed, {0xCF01DULL});
  std::vector<std::size_t> pres, abs;
  for (std::size_t r = 0; r < data.size(); ++r)
    (data.label(r) == Label::kPresence ? pres : abs).push_back(r);
  std::shuffle(pres.begin(), pres.end(), rng);
  std::shuffle(abs.begin(), abs.end(), rng);
  std::vector<int> fold(data.size());
  std::size_t next = 0;
  for (const auto* cls : {&pres, &abs})
    for (std::size_t r : *cls) fold[r] = static_cast<int>(next++ % static_cast<std::size_t>(k));

  std::vector<std::uint8_t> actual, predicted;
  actual.reserve(data.size());
  predicted.reserve(data.size());
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t r = 0; r < data.size(); ++r)
      (fold[r] == f ? test : train).push_back(r);
    LearnerParams fold_params = params;
    fold_params.seed = params.seed + static_cast<std::uint64_t>(f) + 1;
    const RuleSet model = Learn(data.Subset(train), fold_params);
    const LabeledDataset held = data.Subset(test);
    const auto pred = model.ClassifyAll(held);
    actual.insert(actual.end(), held.presence().begin(), held.presence().end());
    predicted.insert(predicted.end(), pred.begin(), pred.end());
  }
  return Score(actual, predicted);
}

}  // namespace sdnfuzz
