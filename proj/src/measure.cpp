#include "ppdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppdim/exact_sum.hpp"

namespace ppdim {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.position)) {
      throw std::invalid_argument("AtomicMeasure: non-finite position");
    }
    if (!std::isfinite(a.weight) || !(a.weight > 0.0)) {
      throw std::invalid_argument("AtomicMeasure: weights must be positive and finite");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });

  positions_.reserve(atoms.size());
  weights_.reserve(atoms.size());
  ExactSum total;
  std::size_t i = 0;
  while (i < atoms.size()) {
    std::size_t j = i + 1;
    while (j < atoms.size() && atoms[j].position == atoms[i].position) {
      ++j;
    }
    double w = atoms[i].weight;
    if (j - i > 1) {
      ExactSum merged;
      for (std::size_t k = i; k < j; ++k) {
        merged.add(atoms[k].weight);
      }
      w = merged.value();
    }
    positions_.push_back(atoms[i].position);
    weights_.push_back(w);
    total.add(w);
    i = j;
  }
  total_mass_ = total.value();
  if (!std::isfinite(total_mass_)) {
    throw std::invalid_argument("AtomicMeasure: total mass overflows");
  }
}

double AtomicMeasure::min_position() const {
  if (empty()) {
    throw std::logic_error("AtomicMeasure: empty measure has no support");
  }
  return positions_.front();
}

double AtomicMeasure::max_position() const {
  if (empty()) {
    throw std::logic_error("AtomicMeasure: empty measure has no support");
  }
  return positions_.back();
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("AtomicMeasure::scaled: factor must be positive");
  }
  std::vector<Atom> atoms(size());
  for (std::size_t i = 0; i < size(); ++i) {
    atoms[i] = {positions_[i], weights_[i] * factor};
  }
  return AtomicMeasure(std::move(atoms));
}

std::pair<std::size_t, std::size_t> ball_range(const AtomicMeasure& mu, double x, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("ball_range: eps must be positive");
  }
  const auto pos = mu.positions();
  const auto first = std::partition_point(pos.begin(), pos.end(), [&](double p) {
    return p < x && !(x - p < eps);
  });
  const auto last = std::partition_point(first, pos.end(), [&](double p) {
    return !(p > x && !(p - x < eps));
  });
  return {static_cast<std::size_t>(first - pos.begin()),
          static_cast<std::size_t>(last - pos.begin())};
}

double ball_mass(const AtomicMeasure& mu, double x, double eps) {
  const auto [first, last] = ball_range(mu, x, eps);
  if (last - first == 1) {
    return mu.weights()[first];
  }
  ExactSum sum;
  for (std::size_t i = first; i < last; ++i) {
    sum.add(mu.weights()[i]);
  }
  return sum.value();
}

AtomicMeasure normalize(const AtomicMeasure& mu) {
  if (mu.empty() || !(mu.total_mass() > 0.0)) {
    throw std::invalid_argument("normalize: zero measure");
  }
  return mu.scaled(1.0 / mu.total_mass());
}

double min_gap(const AtomicMeasure& mu) {
  if (mu.size() < 2) {
    throw std::invalid_argument("min_gap: need at least two atoms");
  }
  const auto pos = mu.positions();
  double best = pos[1] - pos[0];
  for (std::size_t i = 2; i < pos.size(); ++i) {
    best = std::min(best, pos[i] - pos[i - 1]);
  }
  return best;
}

double max_gap(const AtomicMeasure& mu) {
  if (mu.size() < 2) {
    throw std::invalid_argument("max_gap: need at least two atoms");
  }
  const auto pos = mu.positions();
  double best = pos[1] - pos[0];
  for (std::size_t i = 2; i < pos.size(); ++i) {
    best = std::max(best, pos[i] - pos[i - 1]);
  }
  return best;
}

void write_csv(std::ostream& out, const AtomicMeasure& mu) {
  out << "position,weight\n";
  char buf[64];
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mu.positions()[i], mu.weights()[i]);
    out << buf;
  }
}

AtomicMeasure read_measure_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("position,weight", 0) != 0) {
    throw std::runtime_error("measure csv: expected header 'position,weight'");
  }
  std::vector<Atom> atoms;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    Atom a;
    char comma = 0;
    if (!(fields >> a.position >> comma >> a.weight) || comma != ',') {
      throw std::runtime_error("measure csv: malformed row " + std::to_string(row));
    }
    atoms.push_back(a);
  }
  return AtomicMeasure(std::move(atoms));
}

}  // namespace ppdim
