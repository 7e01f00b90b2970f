#include "irsa/codebook.hpp"

#include "irsa/errors.hpp"
#include "irsa/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace irsa {

namespace {

struct BlockHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept
  {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto b : v) {
      h = splitmix64(h ^ b);
    }
    return static_cast<std::size_t>(h);
  }
};

// Minimal-weight primitive polynomials (Lin & Costello, Table 2.7).
constexpr std::array<std::uint32_t, 17> kPrimitive = {
    0,       0,       0x7,     0xB,     0x13,    0x25,    0x43,    0x83,   0x11D,
    0x211,   0x409,   0x805,   0x1053,  0x201B,  0x4443,  0x8003,  0x1100B,
};

}  // namespace

Codebook::Codebook(std::size_t count, int n0, CodebookKind kind)
  : count_(count)
  , n0_(n0)
  , blocks_((static_cast<std::size_t>(n0) + 1 + 63) / 64)
  , kind_(kind)
  , data_(count * blocks_, 0)
{}

Codebook Codebook::from_strings(const std::vector<std::string>& words)
{
  if (words.empty()) {
    throw InvalidParameters("codebook needs at least one word");
  }
  const std::size_t length = words.front().size();
  if (length < 1) {
    throw InvalidParameters("codewords need a pilot bit");
  }
  Codebook book(words.size(), static_cast<int>(length) - 1, ExplicitKind{});
  std::unordered_set<std::vector<std::uint64_t>, BlockHash> seen;
  for (Index i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (w.size() != length) {
      throw InvalidParameters("codewords differ in length");
    }
    std::uint64_t* dst = book.mutable_word(i);
    for (std::size_t j = 0; j < length; ++j) {
      if (w[j] == '1') {
        dst[j / 64] |= std::uint64_t{1} << (j % 64);
      } else if (w[j] != '0') {
        throw InvalidParameters("codeword characters must be '0' or '1'");
      }
    }
    if (w[0] != '1') {
      throw InvalidParameters("codeword " + w + " lacks the unit pilot");
    }
    if (!seen.emplace(dst, dst + book.blocks_).second) {
      throw InvalidParameters("duplicate codeword " + w);
    }
  }
  return book;
}

std::string Codebook::to_string(Index i) const
{
  std::string s(static_cast<std::size_t>(word_length()), '0');
  for (int j = 0; j < word_length(); ++j) {
    if (bit(i, j)) {
      s[static_cast<std::size_t>(j)] = '1';
    }
  }
  return s;
}

Codebook gen_iid_codebook(std::size_t count, int n0, double nu, std::uint64_t seed)
{
  if (!(nu > 0.0 && nu < 1.0)) {
    throw InvalidParameters("Bernoulli parameter must lie in (0, 1)");
  }
  if (n0 < 0) {
    throw InvalidParameters("payload length must be nonnegative");
  }
  if (n0 < 63 && count > (std::uint64_t{1} << n0)) {
    throw InvalidParameters("codebook size exceeds 2^n0");
  }
  Codebook book(count, n0, IidKind{nu, seed});
  Stream rng(seed, StreamTag::codebook, 0);
  std::unordered_set<std::vector<std::uint64_t>, BlockHash> seen;
  seen.reserve(count);
  std::vector<std::uint64_t> key(book.blocks_per_word());

  for (Index i = 0; i < count; ++i) {
    int attempt = 0;
    while (true) {
      std::fill(key.begin(), key.end(), 0);
      key[0] = 1;  // pilot
      for (int j = 1; j <= n0; ++j) {
        if (rng.bernoulli(nu)) {
          key[static_cast<std::size_t>(j) / 64] |= std::uint64_t{1} << (j % 64);
        }
      }
      if (seen.insert(key).second) {
        break;
      }
      if (++attempt >= 1000) {
        throw InvalidParameters("could not draw a distinct codeword after 1000 attempts");
      }
    }
    std::copy(key.begin(), key.end(), book.mutable_word(i));
  }
  return book;
}

std::uint32_t primitive_polynomial(int m)
{
  if (m < 2 || m >= static_cast<int>(kPrimitive.size())) {
    throw InvalidParameters("no primitive polynomial tabulated for m = " + std::to_string(m));
  }
  return kPrimitive[static_cast<std::size_t>(m)];
}

Codebook gen_bch_codebook(int m, int capability, std::size_t count)
{
  const std::uint32_t poly = primitive_polynomial(m);
  if (capability < 1) {
    throw InvalidParameters("BCH capability must be at least 1");
  }
  const std::uint32_t order = (std::uint32_t{1} << m) - 1;
  if (count > order) {
    throw InvalidParameters("BCH codebook size exceeds 2^m - 1");
  }

  // antilog[k] = alpha^k as an m-bit polynomial.
  std::vector<std::uint32_t> antilog(order);
  std::uint32_t element = 1;
  for (std::uint32_t k = 0; k < order; ++k) {
    antilog[k] = element;
    element <<= 1;
    if (element & (std::uint32_t{1} << m)) {
      element ^= poly;
    }
  }

  const int n0 = capability * m;
  Codebook book(count, n0, BchKind{m, capability});
  for (Index i = 0; i < count; ++i) {
    std::uint64_t* dst = book.mutable_word(i);
    dst[0] |= 1;
    const std::uint64_t exponent = static_cast<std::uint64_t>(i) + 1;
    for (int t = 0; t < capability; ++t) {
      const std::uint64_t power = (static_cast<std::uint64_t>(2 * t + 1) * exponent) % order;
      const std::uint32_t value = antilog[power];
      for (int b = 0; b < m; ++b) {
        if ((value >> b) & 1U) {
          const int pos = 1 + t * m + b;
          dst[pos / 64] |= std::uint64_t{1} << (pos % 64);
        }
      }
    }
  }
  return book;
}

ReplicaProfile replica_profile(Index index, const DegreeDistribution& lambda, std::size_t slot_count,
                               std::uint64_t master_seed)
{
  Stream rng(master_seed, StreamTag::graph, index);
  ReplicaProfile profile;
  profile.degree = lambda.sample(rng);
  const auto degree = static_cast<std::size_t>(profile.degree);

  // Partial Fisher-Yates over [0, N) touching only the swapped positions.
  std::vector<std::pair<Index, Index>> moved;
  auto lookup = [&moved](Index pos) {
    for (const auto& [from, to] : moved) {
      if (from == pos) {
        return to;
      }
    }
    return pos;
  };
  auto store = [&moved](Index pos, Index value) {
    for (auto& entry : moved) {
      if (entry.first == pos) {
        entry.second = value;
        return;
      }
    }
    moved.emplace_back(pos, value);
  };

  profile.slots.reserve(degree);
  for (std::size_t j = 0; j < degree; ++j) {
    const auto r = static_cast<Index>(j + rng.below(slot_count - j));
    const Index picked = lookup(r);
    store(r, lookup(static_cast<Index>(j)));
    profile.slots.push_back(picked);
  }
  std::sort(profile.slots.begin(), profile.slots.end());
  return profile;
}

FrameGraph::FrameGraph(std::size_t codeword_count, const DegreeDistribution& lambda, std::size_t slot_count,
                       std::uint64_t master_seed)
{
  if (slot_count < static_cast<std::size_t>(lambda.max_degree())) {
    throw InvalidParameters("fewer slots than the largest replica degree");
  }
  slot_offsets_.reserve(codeword_count + 1);
  slot_offsets_.push_back(0);
  std::vector<std::size_t> load(slot_count, 0);
  for (Index i = 0; i < codeword_count; ++i) {
    const auto profile = replica_profile(i, lambda, slot_count, master_seed);
    for (Index s : profile.slots) {
      slots_.push_back(s);
      ++load[s];
    }
    slot_offsets_.push_back(slots_.size());
  }

  candidate_offsets_.assign(slot_count + 1, 0);
  for (std::size_t s = 0; s < slot_count; ++s) {
    candidate_offsets_[s + 1] = candidate_offsets_[s] + load[s];
  }
  candidates_.resize(slots_.size());
  std::vector<std::size_t> fill(candidate_offsets_.begin(), candidate_offsets_.end() - 1);
  for (Index i = 0; i < codeword_count; ++i) {
    for (Index s : slots(i)) {
      candidates_[fill[s]++] = i;
    }
  }
}

void write_codebook_text(std::ostream& out, const Codebook& book)
{
  for (Index i = 0; i < book.size(); ++i) {
    out << book.to_string(i) << '\n';
  }
}

Codebook read_codebook_text(std::istream& in)
{
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      words.push_back(line);
    }
  }
  return Codebook::from_strings(words);
}

void write_frame_graph_csv(std::ostream& out, const FrameGraph& graph)
{
  out << "index,degree,slots\n";
  for (Index i = 0; i < graph.codeword_count(); ++i) {
    out << i << ',' << graph.degree(i) << ",\"";
    bool first = true;
    for (Index s : graph.slots(i)) {
      out << (first ? "" : ",") << s;
      first = false;
    }
    out << "\"\n";
  }
}

}  // namespace irsa
