#include "area.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "error.hpp"

namespace ggt {

std::string convention_name(RelatorConvention c, std::size_t max_length) {
  switch (c) {
    case RelatorConvention::Literal: return "literal";
    case RelatorConvention::Symmetrized: return "symmetrized";
    case RelatorConvention::BoundedIdentity: return "R_" + std::to_string(max_length);
  }
  return "?";
}

RelatorConvention parse_convention(const std::string& text, std::size_t& max_length) {
  max_length = 0;
  if (text == "literal") return RelatorConvention::Literal;
  if (text == "symmetrized") return RelatorConvention::Symmetrized;
  if (text.rfind("R_", 0) == 0 && text.size() > 2 &&
      text.find_first_not_of("0123456789", 2) == std::string::npos) {
    max_length = std::stoul(text.substr(2));
    return RelatorConvention::BoundedIdentity;
  }
  fail(ErrorCode::Parse, "unknown relator convention '" + text + "'");
}

Word AreaCertificate::product() const {
  Word acc;
  for (const auto& e : entries) {
    acc = reduced_product(acc, e.conjugator.reduced());
    acc = reduced_product(acc, e.relator.reduced());
    acc = reduced_product(acc, e.conjugator.reduced().inverse());
  }
  return acc;
}

VerifyResult verify_certificate(const Presentation& p, const AreaCertificate& cert, const Backend* backend) {
  const std::size_t gens = p.alphabet().generators();
  auto in_alphabet = [&](const Word& w) {
    return std::all_of(w.begin(), w.end(), [&](Letter l) { return l.gen() < gens; });
  };
  if (!in_alphabet(cert.word)) return VerifyResult::failure("base word uses letters outside the alphabet");
  for (std::size_t i = 0; i < cert.entries.size(); ++i) {
    const auto& e = cert.entries[i];
    std::string at = "entry " + std::to_string(i) + ": ";
    if (!in_alphabet(e.conjugator) || !in_alphabet(e.relator))
      return VerifyResult::failure(at + "letters outside the alphabet");
    switch (cert.convention) {
      case RelatorConvention::Literal: {
        bool ok = false;
        for (const Word& r : p.relators()) ok = ok || r == e.relator || r == e.relator.inverse();
        if (!ok) return VerifyResult::failure(at + "relator is not in R or R^-1");
        break;
      }
      case RelatorConvention::Symmetrized:
        if (p.find_symmetrized(e.relator) < 0)
          return VerifyResult::failure(at + "relator is not a rotation of a relator or its inverse");
        break;
      case RelatorConvention::BoundedIdentity:
        if (e.relator.size() > cert.max_relator_length)
          return VerifyResult::failure(at + "relator length " + std::to_string(e.relator.size()) + " exceeds " +
                                       std::to_string(cert.max_relator_length));
        if (!backend) return VerifyResult::failure("bounded-identity convention needs a backend");
        if (!backend->is_identity(e.relator)) return VerifyResult::failure(at + "relator is not an identity word");
        break;
    }
  }
  if (cert.product() != cert.word.reduced())
    return VerifyResult::failure("product of conjugated relators does not freely reduce to the word");
  return {};
}

// ---------------------------------------------------------------------------

namespace {

// Returns twice the projected signed areas A_ij (i<j), flattened.
std::vector<std::int64_t> doubled_signed_areas(const Backend& b, const Word& w) {
  const Factor& f = b.factors().front();
  std::size_t n = f.rank;
  std::vector<std::int64_t> x(n, 0), areas;
  areas.assign(n * (n - 1) / 2, 0);
  for (Letter l : w) {
    const auto& img = f.abelian_images[l.gen()];
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        std::int64_t vi = l.sign() * img[i], vj = l.sign() * img[j];
        areas[k] += 2 * x[i] * vj + vi * vj;
      }
    for (std::size_t i = 0; i < n; ++i) x[i] += l.sign() * img[i];
  }
  return areas;
}

std::int64_t total_abs(const std::vector<std::int64_t>& v) {
  std::int64_t s = 0;
  for (auto a : v) s += a < 0 ? -a : a;
  return s;
}

bool single_abelian(const Backend& b) {
  return b.kind() == BackendKind::FreeAbelian && b.factors().size() == 1;
}

struct InvariantBound {
  std::int64_t per_relator = 0;  // largest doubled contribution of one relator
  const Backend* backend = nullptr;

  std::size_t operator()(const Word& w) const {
    if (w.empty()) return 0;
    std::size_t base = 1;
    if (per_relator > 0) {
      std::int64_t total = total_abs(doubled_signed_areas(*backend, w));
      base = std::max<std::size_t>(base, static_cast<std::size_t>((total + per_relator - 1) / per_relator));
    }
    return base;
  }
};

InvariantBound make_bound(const Presentation& p, const Backend& b) {
  InvariantBound h;
  h.backend = &b;
  if (single_abelian(b) && b.factors().front().rank >= 2)
    for (const Word& r : p.relators()) h.per_relator = std::max(h.per_relator, total_abs(doubled_signed_areas(b, r)));
  return h;
}

}  // namespace

std::size_t signed_area_lower_bound(const Presentation& p, const Backend& backend, const Word& w) {
  if (!single_abelian(backend)) return 0;
  InvariantBound h = make_bound(p, backend);
  if (h.per_relator == 0) return 0;
  return h(w.reduced());
}

AreaBounds area_search(const Presentation& p, const Backend& backend, const Word& w, std::size_t cap_len,
                       std::size_t cap_states) {
  if (!backend.is_identity(w)) fail(ErrorCode::NotIdentity, "word is not trivial in the group");
  AreaBounds out;
  out.cap_len = cap_len;
  out.cap_states = cap_states;

  Word start = w.reduced();
  if (start.size() > cap_len)
    fail(ErrorCode::InvalidArgument, "cap_len " + std::to_string(cap_len) + " is below the reduced word length " +
                                         std::to_string(start.size()));
  const auto& sym = p.symmetrized();
  InvariantBound bound = make_bound(p, backend);

  struct Node {
    Word word;
    std::size_t cost;
    std::size_t estimate;
    std::int64_t parent;
    std::size_t position;
    std::size_t relator;
  };
  std::vector<Node> nodes;
  std::unordered_map<Word, std::size_t, WordHash> index;

  auto worse = [&nodes](const std::pair<std::size_t, std::size_t>& a, const std::pair<std::size_t, std::size_t>& b) {
    // (priority, node); min-heap on priority, then shorter word, then lexicographic.
    if (a.first != b.first) return a.first > b.first;
    const Word& wa = nodes[a.second].word;
    const Word& wb = nodes[b.second].word;
    if (wa.size() != wb.size()) return wa.size() > wb.size();
    return std::lexicographical_compare(wb.begin(), wb.end(), wa.begin(), wa.end());
  };
  std::priority_queue<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>,
                      decltype(worse)>
      queue(worse);

  nodes.push_back({start, 0, bound(start), -1, 0, 0});
  index.emplace(start, 0);
  queue.emplace(nodes[0].estimate, 0);

  std::optional<std::size_t> goal;
  bool aborted = false;
  while (!queue.empty()) {
    auto [prio, id] = queue.top();
    if (prio != nodes[id].cost + nodes[id].estimate) {
      queue.pop();
      continue;
    }
    if (nodes[id].word.empty()) {
      goal = id;
      break;
    }
    queue.pop();
    const Word cur = nodes[id].word;
    const std::size_t cost = nodes[id].cost;
    for (std::size_t pos = 0; pos <= cur.size(); ++pos) {
      Word left = cur.prefix(pos);
      Word right = cur.subword(pos, cur.size() - pos);
      for (std::size_t ri = 0; ri < sym.size(); ++ri) {
        Word next = reduced_product(reduced_product(left, sym[ri]), right);
        if (next.size() > cap_len) continue;
        auto it = index.find(next);
        if (it != index.end()) {
          Node& n = nodes[it->second];
          if (n.cost <= cost + 1) continue;
          n.cost = cost + 1;
          n.parent = static_cast<std::int64_t>(id);
          n.position = pos;
          n.relator = ri;
          queue.emplace(n.cost + n.estimate, it->second);
          continue;
        }
        if (nodes.size() >= cap_states) {
          aborted = true;
          break;
        }
        std::size_t est = bound(next);
        index.emplace(next, nodes.size());
        nodes.push_back({std::move(next), cost + 1, est, static_cast<std::int64_t>(id), pos, ri});
        queue.emplace(cost + 1 + est, nodes.size() - 1);
      }
      if (aborted) break;
    }
    if (aborted) break;
  }
  out.states = nodes.size();

  if (goal) {
    std::vector<std::size_t> path;
    for (std::int64_t at = static_cast<std::int64_t>(*goal); at >= 0; at = nodes[at].parent) path.push_back(at);
    std::reverse(path.begin(), path.end());
    AreaCertificate cert;
    cert.word = w;
    cert.convention = RelatorConvention::Symmetrized;
    for (std::size_t k = 1; k < path.size(); ++k) {
      const Node& n = nodes[path[k]];
      const Word& before = nodes[path[k - 1]].word;
      cert.entries.push_back({before.prefix(n.position), sym[n.relator].inverse()});
    }
    out.upper = nodes[*goal].cost;
    out.lower = *out.upper;
    out.exhausted = true;
    out.certificate = std::move(cert);
  } else if (aborted) {
    // Every state still queued has priority >= the top, which bounds the area.
    out.lower = queue.empty() ? 0 : queue.top().first;
    out.exhausted = false;
  } else {
    out.lower = 0;
    out.exhausted = true;
  }
  return out;
}

AreaBounds area_from_dehn(const Backend& backend, const Word& w) {
  DehnResult res = backend.dehn_reduce(w);
  if (!res.word.empty()) fail(ErrorCode::NotIdentity, "word is not trivial in the group");
  const auto& sym = backend.presentation()->symmetrized();
  AreaCertificate cert;
  cert.word = w;
  cert.convention = RelatorConvention::Symmetrized;
  for (const auto& m : res.moves) cert.entries.push_back({m.prefix, sym[m.symmetrized]});
  AreaBounds out;
  out.upper = cert.count();
  out.lower = w.reduced().empty() ? 0 : 1;
  out.certificate = std::move(cert);
  return out;
}

AreaCertificate commuting_filler(const Presentation& p, const Backend& backend, const Word& w) {
  if (!single_abelian(backend) || !backend.presentation())
    fail(ErrorCode::Unsupported, "commuting filler needs a free abelian backend with a presentation");
  if (!backend.is_identity(w)) fail(ErrorCode::NotIdentity, "word is not trivial in the group");
  AreaCertificate cert;
  cert.word = w;
  cert.convention = RelatorConvention::Symmetrized;
  Word cur = w.reduced();
  for (;;) {
    std::size_t pos = 0;
    while (pos + 1 < cur.size() && cur[pos].gen() <= cur[pos + 1].gen()) ++pos;
    if (pos + 1 >= cur.size()) break;
    Letter x = cur[pos], y = cur[pos + 1];
    Word comm{x, y, x.inverse(), y.inverse()};
    if (p.find_symmetrized(comm) < 0) fail(ErrorCode::InvalidArgument, "presentation lacks a needed commutator");
    // u x y z = (u [x,y] u^-1) u y x z
    cert.entries.push_back({cur.prefix(pos), comm});
    Word swapped = cur.prefix(pos);
    swapped.push_back(y);
    swapped.push_back(x);
    swapped.append(cur.subword(pos + 2, cur.size() - pos - 2));
    cur = swapped.reduced();
  }
  if (!cur.empty()) fail(ErrorCode::Verification, "commuting filler did not reach the empty word");
  return cert;
}

AreaBounds area_bounds(const Presentation& p, const Backend& backend, const Word& w, std::size_t cap_len,
                       std::size_t cap_states) {
  if (!backend.is_identity(w)) fail(ErrorCode::NotIdentity, "word is not trivial in the group");
  AreaBounds best;
  best.cap_len = cap_len;
  best.cap_states = cap_states;
  Word red = w.reduced();
  if (red.empty()) {
    best.upper = 0;
    best.exhausted = true;
    AreaCertificate empty;
    empty.word = w;
    best.certificate = std::move(empty);
    return best;
  }
  best.lower = 1;

  auto consider = [&](AreaBounds b) {
    best.lower = std::max(best.lower, b.lower);
    if (b.upper && (!best.upper || *b.upper < *best.upper)) {
      best.upper = b.upper;
      best.certificate = std::move(b.certificate);
    }
    best.states += b.states;
    best.exhausted = best.exhausted || b.exhausted;
  };

  if (backend.kind() == BackendKind::SmallCancellation) consider(area_from_dehn(backend, w));
  if (single_abelian(backend) && backend.presentation()) {
    AreaBounds g;
    g.certificate = commuting_filler(p, backend, w);
    g.upper = g.certificate->count();
    g.lower = signed_area_lower_bound(p, backend, w);
    consider(std::move(g));
  }
  if (!best.exact() && red.size() <= cap_len) consider(area_search(p, backend, w, cap_len, cap_states));
  return best;
}

}  // namespace ggt
