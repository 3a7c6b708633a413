#include "testel/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "testel/error.hpp"

namespace testel {

Perm::Perm(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), 0);
}

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (int x : images_) {
    require(x >= 0 && static_cast<std::size_t>(x) < images_.size() && !hit[static_cast<std::size_t>(x)],
            ErrorCode::InvalidArgument, "image list is not a permutation");
    hit[static_cast<std::size_t>(x)] = true;
  }
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) return false;
  return true;
}

Perm Perm::then(const Perm& other) const {
  require(degree() == other.degree(), ErrorCode::InvalidArgument, "permutation degrees differ");
  Perm out(degree());
  for (std::size_t i = 0; i < degree(); ++i)
    out.images_[i] = other.images_[static_cast<std::size_t>(images_[i])];
  return out;
}

Perm Perm::inverse() const {
  Perm out(degree());
  for (std::size_t i = 0; i < degree(); ++i) out.images_[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return out;
}

Perm parse_cycles(std::string_view text, std::size_t degree) {
  std::vector<int> images(degree);
  std::iota(images.begin(), images.end(), 0);
  std::vector<bool> used(degree, false);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip();
  while (pos < text.size()) {
    require(text[pos] == '(', ErrorCode::Parse, "expected '(' in cycle notation: " + std::string(text));
    ++pos;
    std::vector<int> cycle;
    skip();
    while (pos < text.size() && text[pos] != ')') {
      std::size_t end = pos;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      require(end > pos, ErrorCode::Parse, "expected point in cycle notation: " + std::string(text));
      const int point = std::stoi(std::string(text.substr(pos, end - pos)));
      require(point >= 1 && static_cast<std::size_t>(point) <= degree, ErrorCode::OutOfRange,
              "cycle point " + std::to_string(point) + " exceeds degree " + std::to_string(degree));
      require(!used[static_cast<std::size_t>(point - 1)], ErrorCode::Parse,
              "cycles must be disjoint: " + std::string(text));
      used[static_cast<std::size_t>(point - 1)] = true;
      cycle.push_back(point - 1);
      pos = end;
      skip();
      if (pos < text.size() && text[pos] == ',') ++pos;
      skip();
    }
    require(pos < text.size(), ErrorCode::Parse, "unterminated cycle: " + std::string(text));
    ++pos;
    for (std::size_t i = 0; i < cycle.size(); ++i)
      images[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
    skip();
  }
  return Perm(std::move(images));
}

std::string to_cycles(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (seen[i] || p(static_cast<int>(i)) == static_cast<int>(i)) continue;
    out += '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += ',';
      out += std::to_string(j + 1);
      first = false;
      j = static_cast<std::size_t>(p(static_cast<int>(j)));
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Perm evaluate(std::span<const Perm> images, const Word& w) {
  require(!images.empty(), ErrorCode::InvalidArgument, "no generator images");
  require(w.rank() <= static_cast<int>(images.size()), ErrorCode::RankMismatch,
          "word uses generators without images");
  const std::size_t degree = images.front().degree();
  std::vector<Perm> inverses;
  inverses.reserve(images.size());
  for (const auto& p : images) inverses.push_back(p.inverse());
  std::vector<int> points(degree);
  std::iota(points.begin(), points.end(), 0);
  for (Letter l : w.letters()) {
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    const Perm& step = l > 0 ? images[i] : inverses[i];
    for (auto& x : points) x = step(x);
  }
  return Perm(std::move(points));
}

std::optional<std::uint64_t> group_order(std::span<const Perm> generators, std::size_t degree,
                                         std::uint64_t cap) {
  std::set<Perm> elements{Perm(degree)};
  std::vector<Perm> frontier{Perm(degree)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& g : frontier) {
      for (const auto& s : generators) {
        Perm h = g.then(s);
        if (elements.insert(h).second) {
          if (elements.size() > cap) return std::nullopt;
          next.push_back(std::move(h));
        }
      }
    }
    frontier = std::move(next);
  }
  return elements.size();
}

}  // namespace testel
