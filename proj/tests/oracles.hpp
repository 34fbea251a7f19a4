#pragma once

// Independent reference computations. Nothing here calls into the library's
// metric or likelihood code.

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "edurec/rng.hpp"
#include "edurec/table.hpp"

namespace oracle {

struct Tally {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> m;
};

// Straight double loop over instances, no indexing tricks.
inline Tally tally(const std::vector<std::string>& truths, const std::vector<std::string>& preds) {
  std::set<std::string> all(truths.begin(), truths.end());
  all.insert(preds.begin(), preds.end());
  Tally t;
  t.classes.assign(all.begin(), all.end());
  t.m.assign(t.classes.size(), std::vector<std::size_t>(t.classes.size(), 0));
  for (std::size_t i = 0; i < t.classes.size(); ++i) {
    for (std::size_t j = 0; j < t.classes.size(); ++j) {
      for (std::size_t n = 0; n < truths.size(); ++n) {
        if (truths[n] == t.classes[i] && preds[n] == t.classes[j]) ++t.m[i][j];
      }
    }
  }
  return t;
}

inline double accuracy(const std::vector<std::string>& truths,
                       const std::vector<std::string>& preds) {
  std::size_t hit = 0;
  for (std::size_t n = 0; n < truths.size(); ++n) hit += truths[n] == preds[n];
  return static_cast<double>(hit) / static_cast<double>(truths.size());
}

struct Prf {
  double p, r, f;
};

// Per-instance counting of TP/FP/FN for one label.
inline Prf prf(const std::vector<std::string>& truths, const std::vector<std::string>& preds,
               const std::string& label) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t n = 0; n < truths.size(); ++n) {
    const bool t = truths[n] == label, p = preds[n] == label;
    if (t && p) tp += 1;
    if (!t && p) fp += 1;
    if (t && !p) fn += 1;
  }
  const double prec = tp + fp == 0 ? 0.0 : tp / (tp + fp);
  const double rec = tp + fn == 0 ? 0.0 : tp / (tp + fn);
  const double f = prec + rec == 0 ? 0.0 : 2 * prec * rec / (prec + rec);
  return {prec, rec, f};
}

inline double macro_f(const std::vector<std::string>& truths,
                      const std::vector<std::string>& preds) {
  std::set<std::string> all(truths.begin(), truths.end());
  all.insert(preds.begin(), preds.end());
  double sum = 0;
  for (const auto& c : all) sum += prf(truths, preds, c).f;
  return sum / static_cast<double>(all.size());
}

// Bayes by direct product of probabilities estimated from raw counts.
inline std::map<std::string, double> nb_posterior(const edurec::Table& train,
                                                  const edurec::Row& x, double alpha,
                                                  double var_floor) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < train.size(); ++i) by_class[train.labels[i]].push_back(i);
  std::map<std::string, double> joint;
  double evidence = 0;
  for (const auto& [label, idx] : by_class) {
    const double nc = static_cast<double>(idx.size());
    double p = nc / static_cast<double>(train.size());
    for (std::size_t a = 0; a < train.attributes.size(); ++a) {
      if (train.attributes[a].kind == edurec::AttributeKind::numeric) {
        double mean = 0;
        for (auto i : idx) mean += std::get<double>(train.rows[i][a]);
        mean /= nc;
        double var = 0;
        for (auto i : idx) {
          const double d = std::get<double>(train.rows[i][a]) - mean;
          var += d * d;
        }
        var = std::max(var / nc, var_floor);
        const double d = std::get<double>(x[a]) - mean;
        p *= std::exp(-d * d / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
      } else {
        std::set<std::string> vocab;
        for (const auto& r : train.rows) vocab.insert(std::get<std::string>(r[a]));
        double hits = 0;
        for (auto i : idx) hits += std::get<std::string>(train.rows[i][a]) == std::get<std::string>(x[a]);
        p *= (hits + alpha) / (nc + alpha * static_cast<double>(vocab.size()));
      }
    }
    joint[label] = p;
    evidence += p;
  }
  for (auto& [label, p] : joint) p /= evidence;
  return joint;
}

// Small random mixed-type table; numeric columns stay in a narrow range so
// the direct product does not underflow.
inline edurec::Table random_table(std::uint64_t seed) {
  edurec::SplitMix64 rng(seed);
  const std::size_t n_attr = 1 + rng.uniform_index(3);
  const std::size_t n_rows = 2 + rng.uniform_index(29);
  const std::size_t n_classes = 2 + rng.uniform_index(2);
  edurec::Table t;
  for (std::size_t a = 0; a < n_attr; ++a) {
    const bool numeric = rng.bernoulli(0.5);
    t.attributes.push_back({"a" + std::to_string(a),
                            numeric ? edurec::AttributeKind::numeric
                                    : edurec::AttributeKind::categorical});
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    edurec::Row row;
    for (const auto& attr : t.attributes) {
      if (attr.kind == edurec::AttributeKind::numeric) {
        row.emplace_back(rng.uniform01() * 4.0);
      } else {
        row.emplace_back(std::string(1, static_cast<char>('p' + rng.uniform_index(4))));
      }
    }
    t.rows.push_back(std::move(row));
    t.labels.push_back("c" + std::to_string(rng.uniform_index(n_classes)));
  }
  return t;
}

}  // namespace oracle
