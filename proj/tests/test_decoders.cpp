#include "irsa/decoders.hpp"
#include "irsa/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace irsa;

namespace {

Codebook worked_book()
{
  return Codebook::from_strings({"11001", "10001", "11100", "11011", "10111", "11010"});
}

std::vector<Index> all_indices(std::size_t count)
{
  std::vector<Index> out(count);
  for (Index i = 0; i < count; ++i) {
    out[i] = i;
  }
  return out;
}

// Per-position compatibility predicate written out directly.
bool compatible(const Codebook& book, Index i, const std::vector<std::int32_t>& y)
{
  const int k = y[0];
  for (int j = 1; j < book.word_length(); ++j) {
    const bool bit = book.bit(i, j);
    if (y[static_cast<std::size_t>(j)] == k && !bit) {
      return false;
    }
    if (y[static_cast<std::size_t>(j)] == 0 && bit) {
      return false;
    }
  }
  return true;
}

std::vector<std::int32_t> column_sum(const Codebook& book, const std::vector<Index>& words)
{
  std::vector<std::int32_t> y(static_cast<std::size_t>(book.word_length()), 0);
  for (Index i : words) {
    for (int j = 0; j < book.word_length(); ++j) {
      y[static_cast<std::size_t>(j)] += book.bit(i, j) ? 1 : 0;
    }
  }
  return y;
}

bool subset_of(const std::vector<Index>& a, const std::vector<Index>& b)
{
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct RandomFrame {
  Codebook book;
  FrameGraph graph;
  ReceivedFrame frame;
};

RandomFrame random_frame(std::uint64_t seed, std::size_t codewords, int n0, std::size_t slots, std::size_t active,
                         const DegreeDistribution& lambda)
{
  auto book = gen_iid_codebook(codewords, n0, 0.5, seed);
  FrameGraph graph(codewords, lambda, slots, seed);
  Stream rng(seed, StreamTag::assignment, 0);
  const auto sent = assign_codewords(active, codewords, rng);
  auto frame = transmit(book, graph, sent);
  return {std::move(book), std::move(graph), std::move(frame)};
}

}  // namespace

TEST(DecoderKind, NamesRoundTrip)
{
  for (auto kind : {DecoderKind::singleton, DecoderKind::ed_mpr, DecoderKind::ed_fg, DecoderKind::pvtc}) {
    EXPECT_EQ(parse_decoder_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_decoder_kind("singleton"), DecoderKind::singleton);
  EXPECT_THROW(parse_decoder_kind("sic"), InvalidParameters);
}

TEST(DiscardPass, WorkedExample)
{
  const auto book = worked_book();
  const std::vector<std::int32_t> y = {3, 2, 0, 1, 3};
  const auto survivors = discard_pass(y, 3, all_indices(6), book);
  EXPECT_EQ(survivors, (std::vector<Index>{0, 1, 3}));
}

TEST(DiscardPass, DegreeOneKeepsExactMatchOnly)
{
  const auto book = gen_iid_codebook(64, 6, 0.5, 3);
  for (Index t = 0; t < 64; ++t) {
    const auto y = column_sum(book, {t});
    EXPECT_EQ(discard_pass(y, 1, all_indices(64), book), std::vector<Index>{t});
  }
}

TEST(DiscardPass, AgreesWithPredicateOnRandomInstances)
{
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto book = gen_iid_codebook(8, 6, 0.5, seed);
    Stream rng(seed, StreamTag::generic, 1);
    const auto sent = assign_codewords(2, 8, rng);
    auto sorted = sent;
    std::sort(sorted.begin(), sorted.end());
    const auto y = column_sum(book, sorted);
    std::vector<Index> expected;
    for (Index i = 0; i < 8; ++i) {
      if (compatible(book, i, y)) {
        expected.push_back(i);
      }
    }
    EXPECT_EQ(discard_pass(y, 2, all_indices(8), book), expected);
    EXPECT_TRUE(subset_of(sorted, expected));
  }
}

TEST(DiscardPass, KeepsInputOrder)
{
  const auto book = worked_book();
  const std::vector<std::int32_t> y = {3, 2, 0, 1, 3};
  const std::vector<Index> reversed = {5, 4, 3, 2, 1, 0};
  EXPECT_EQ(discard_pass(y, 3, reversed, book), (std::vector<Index>{3, 1, 0}));
}

TEST(ResolveSlot, WorkedExampleResolves)
{
  const auto book = worked_book();
  const FrameGraph graph(6, DegreeDistribution::regular(1), 1, 0);
  const auto frame = transmit(book, graph, std::vector<Index>{0, 1, 3});
  DecoderState state(frame, graph);
  const auto result = resolve_slot(state, 0, book);
  ASSERT_TRUE(result.has_value());
  EXPECT_EQ(*result, (std::vector<Index>{0, 1, 3}));
  EXPECT_EQ(state.live(0).size(), 3U);
}

TEST(ResolveSlot, TooManySurvivorsLeavesSlotOpen)
{
  // Four words share every payload position the residual constrains.
  const auto book = Codebook::from_strings({"1100", "1010", "1001", "1111"});
  const FrameGraph graph(4, DegreeDistribution::regular(1), 1, 0);
  const auto frame = transmit(book, graph, std::vector<Index>{0, 1, 2});
  DecoderState state(frame, graph);
  EXPECT_FALSE(resolve_slot(state, 0, book).has_value());
}

TEST(ResolveSlot, InconsistentResidualThrows)
{
  const auto book = worked_book();
  const FrameGraph graph(6, DegreeDistribution::regular(1), 1, 0);
  auto frame = transmit(book, graph, std::vector<Index>{0, 1, 3});
  // Demands more ones than any three candidates provide.
  frame.row(0)[2] = 3;
  frame.row(0)[3] = 3;
  DecoderState state(frame, graph);
  EXPECT_THROW(resolve_slot(state, 0, book), InternalInconsistency);
}

TEST(Decoders, EmptyFrame)
{
  const auto book = gen_iid_codebook(30, 8, 0.5, 1);
  const FrameGraph graph(30, DegreeDistribution::regular(2), 6, 1);
  const auto frame = transmit(book, graph, {});
  for (auto kind : {DecoderKind::singleton, DecoderKind::ed_mpr, DecoderKind::ed_fg}) {
    const auto out = decode(kind, frame, graph, book);
    EXPECT_TRUE(out.decoded.empty());
    EXPECT_EQ(out.undecoded_count, 0U);
    // ED-FG spends one sweep ruling out every listed candidate.
    EXPECT_EQ(out.iterations, kind == DecoderKind::ed_fg ? 2 : 1);
  }
}

TEST(Decoders, SingleUserDecodedInFirstIteration)
{
  const auto book = gen_iid_codebook(300, 12, 0.5, 2);
  const FrameGraph graph(300, DegreeDistribution::regular(2), 20, 2);
  const auto frame = transmit(book, graph, std::vector<Index>{123});
  for (auto kind : {DecoderKind::singleton, DecoderKind::ed_mpr, DecoderKind::ed_fg}) {
    const auto out = decode(kind, frame, graph, book);
    EXPECT_EQ(out.decoded, std::vector<Index>{123});
    ASSERT_FALSE(out.per_slot_log.empty());
    EXPECT_EQ(out.per_slot_log.front().iteration, 1);
  }
}

TEST(Decoders, TwoUsersSharingBothSlots)
{
  // Under Lambda = x^2 with N = 2 every word occupies both slots.
  const auto book = Codebook::from_strings({"10011", "10101", "11000", "11111"});
  const FrameGraph graph(4, DegreeDistribution::regular(2), 2, 0);
  const auto frame = transmit(book, graph, std::vector<Index>{0, 1});
  EXPECT_TRUE(singleton_decode(frame, graph, book).decoded.empty());
  EXPECT_EQ(singleton_decode(frame, graph, book).undecoded_count, 2U);
  EXPECT_EQ(ed_mpr_decode(frame, graph, book).decoded, (std::vector<Index>{0, 1}));
  EXPECT_EQ(ed_fg_decode(frame, graph, book).decoded, (std::vector<Index>{0, 1}));
}

TEST(Decoders, SingletonDecodesCollisionFreeFrames)
{
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 20 && seed < 500; ++seed) {
    auto f = random_frame(seed, 200, 12, 100, 5, DegreeDistribution::regular(2));
    bool clean = true;
    for (Index s = 0; s < 100; ++s) {
      clean = clean && f.frame.at(s, 0) <= 1;
    }
    if (!clean) {
      continue;
    }
    ++checked;
    EXPECT_EQ(singleton_decode(f.frame, f.graph, f.book).decoded, f.frame.truth);
  }
  EXPECT_EQ(checked, 20);
}

// Slot A's discards remove the only spurious candidate of slot B.
TEST(Decoders, FullGraphPropagationHelps)
{
  bool found = false;
  for (std::uint64_t seed = 0; seed < 2000 && !found; ++seed) {
    auto f = random_frame(seed, 60, 6, 6, 6, DegreeDistribution::regular(2));
    const auto mpr = ed_mpr_decode(f.frame, f.graph, f.book);
    const auto fg = ed_fg_decode(f.frame, f.graph, f.book);
    ASSERT_TRUE(subset_of(mpr.decoded, fg.decoded));
    if (fg.decoded.size() > mpr.decoded.size()) {
      found = true;
      // Some codeword decoded only by ED-FG lies in a slot ED-MPR left open.
      std::vector<Index> extra;
      std::set_difference(fg.decoded.begin(), fg.decoded.end(), mpr.decoded.begin(), mpr.decoded.end(),
                          std::back_inserter(extra));
      EXPECT_FALSE(extra.empty());
      EXPECT_TRUE(subset_of(fg.decoded, f.frame.truth));
    }
  }
  EXPECT_TRUE(found);
}

TEST(Decoders, EmptySlotExclusionIsOptional)
{
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto f = random_frame(seed, 120, 8, 12, 14, DegreeDistribution::regular(2));
    DecodeOptions plain;
    plain.check_safety = true;
    plain.exclude_on_empty_slot = false;
    DecodeOptions strong = plain;
    strong.exclude_on_empty_slot = true;
    const auto a = decode(DecoderKind::ed_fg, f.frame, f.graph, f.book, plain);
    const auto b = decode(DecoderKind::ed_fg, f.frame, f.graph, f.book, strong);
    EXPECT_TRUE(subset_of(a.decoded, b.decoded));
  }
}

TEST(Decoders, PvtcNeedsBchBook)
{
  const auto book = gen_iid_codebook(30, 8, 0.5, 1);
  const FrameGraph graph(30, DegreeDistribution::regular(2), 6, 1);
  const auto frame = transmit(book, graph, std::vector<Index>{1});
  EXPECT_THROW(decode(DecoderKind::pvtc, frame, graph, book), InvalidParameters);
}

TEST(Decoders, PvtcResolvesUpToCapability)
{
  const auto book = gen_bch_codebook(6, 2, 63);
  const FrameGraph graph(63, DegreeDistribution::regular(1), 1, 0);
  const auto pair = transmit(book, graph, std::vector<Index>{5, 40});
  EXPECT_EQ(decode(DecoderKind::pvtc, pair, graph, book).decoded, (std::vector<Index>{5, 40}));
  const auto triple = transmit(book, graph, std::vector<Index>{5, 40, 41});
  EXPECT_TRUE(decode(DecoderKind::pvtc, triple, graph, book).decoded.empty());
}

// Soundness, safety, dominance and idempotence on random frames.
TEST(DecoderProperties, RandomFrames)
{
  DecodeOptions options;
  options.check_safety = true;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto lambda = seed % 2 ? DegreeDistribution::regular(2) : DegreeDistribution::parse("0.5x^2+0.5x^3");
    auto f = random_frame(seed, 400, 10, 40, 20 + seed % 60, lambda);
    std::vector<std::vector<Index>> decoded;
    for (auto kind : {DecoderKind::singleton, DecoderKind::ed_mpr, DecoderKind::ed_fg}) {
      DecoderState state(f.frame, f.graph);
      const auto out = run_decoder(kind, state, f.frame, f.graph, f.book, options);
      EXPECT_TRUE(subset_of(out.decoded, f.frame.truth));
      EXPECT_EQ(out.undecoded_count, f.frame.truth.size() - out.decoded.size());
      for (Index s = 0; s < f.graph.slot_count(); ++s) {
        EXPECT_GE(state.k_residual(s), 0);
      }
      const auto again = run_decoder(kind, state, f.frame, f.graph, f.book, options);
      EXPECT_EQ(again.decoded, out.decoded);
      EXPECT_EQ(again.iterations, 1);
      decoded.push_back(out.decoded);
    }
    EXPECT_TRUE(subset_of(decoded[0], decoded[1]));
    EXPECT_TRUE(subset_of(decoded[1], decoded[2]));
  }
}

TEST(PvtcSlot, AllPairsOfSmallBook)
{
  const auto book = gen_bch_codebook(4, 2, 15);
  const auto everyone = all_indices(15);
  for (Index a = 0; a < 15; ++a) {
    const auto single = pvtc_slot_decode(column_sum(book, {a}), 1, everyone, book, 2);
    ASSERT_TRUE(single.has_value());
    EXPECT_EQ(*single, std::vector<Index>{a});
    for (Index b = a + 1; b < 15; ++b) {
      const auto got = pvtc_slot_decode(column_sum(book, {a, b}), 2, everyone, book, 2);
      ASSERT_TRUE(got.has_value());
      EXPECT_EQ(*got, (std::vector<Index>{a, b}));
    }
  }
  EXPECT_FALSE(pvtc_slot_decode(column_sum(book, {0, 1, 2}), 3, everyone, book, 2).has_value());
}

TEST(PvtcSlot, AmbiguousBookIsReported)
{
  const auto book = Codebook::from_strings({"101", "110", "111", "100"});
  const auto y = column_sum(book, {0, 1});
  EXPECT_THROW(pvtc_slot_decode(y, 2, all_indices(4), book, 2), CodebookPropertyViolation);
}

TEST(OracleSlot, ZeroDegree)
{
  const auto book = worked_book();
  const std::vector<std::int32_t> zero(5, 0);
  const auto subsets = oracle_slot_decode(zero, 0, all_indices(6), book);
  ASSERT_EQ(subsets.size(), 1U);
  EXPECT_TRUE(subsets[0].empty());
  const std::vector<std::int32_t> dirty = {0, 1, 0, 0, 0};
  EXPECT_TRUE(oracle_slot_decode(dirty, 0, all_indices(6), book).empty());
}

TEST(OracleSlot, ListsTransmittedSubset)
{
  const auto book = worked_book();
  const std::vector<std::int32_t> y = {3, 2, 0, 1, 3};
  const auto subsets = oracle_slot_decode(y, 3, all_indices(6), book);
  ASSERT_EQ(subsets.size(), 1U);
  EXPECT_EQ(subsets[0], (std::vector<Index>{0, 1, 3}));
}

TEST(OracleSlot, GuardsEnumerationSize)
{
  const auto book = gen_iid_codebook(200, 10, 0.5, 1);
  const auto y = column_sum(book, {0, 1, 2, 3, 4, 5});
  EXPECT_THROW(oracle_slot_decode(y, 6, all_indices(200), book, 1e6), OracleTooLarge);
}

TEST(OutcomeCsv, HeaderAndRow)
{
  std::ostringstream out;
  write_outcome_csv_header(out);
  DecodeOutcome outcome;
  outcome.decoded = {1, 2};
  outcome.iterations = 3;
  write_outcome_csv_row(out, 7, DecoderKind::ed_fg, outcome, 4);
  EXPECT_EQ(out.str(), "frame,decoder,decoded,truth,iterations\n7,ed-fg,2,4,3\n");
}
