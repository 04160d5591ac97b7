#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cantor/errors.hpp"
#include "cantor/trees.hpp"

using namespace cantor;

namespace {

BitWord W(const char* s) { return BitWord(s); }

TreePrefix prefix(unsigned depth, std::initializer_list<const char*> nodes) {
  TreePrefix t;
  t.depth = depth;
  for (const char* n : nodes) t.nodes.insert(n[0] == 0 ? BitWord() : W(n));
  return t;
}

bool consistent(const TreePrefix& t, TreeKind kind) { return classify_prefix(t, kind).consistent; }

// Random downward-closed prefix: each node keeps each child with probability 2/3.
TreePrefix random_prefix(std::mt19937_64& rng, unsigned depth) {
  TreePrefix t;
  t.depth = depth;
  t.nodes.insert(BitWord());
  for (unsigned n = 0; n < depth; ++n)
    for (const auto& w : t.level(n))
      for (bool b : {false, true})
        if (rng() % 3 != 0) t.nodes.insert(w.appended(b));
  return t;
}

bool no_dead_nodes(const TreePrefix& t) {
  for (const auto& w : t.nodes)
    if (w.size() < t.depth && !t.contains(w.appended(false)) && !t.contains(w.appended(true))) return false;
  return true;
}

// Oracle: T equals {w : w[n] = t[n] off A} for some (t, A).
bool silver_oracle(const TreePrefix& t) {
  const unsigned d = t.depth;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << d); ++a)
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << d); ++p) {
      std::set<BitWord> generated;
      for (unsigned len = 0; len <= d; ++len)
        for (const auto& w : all_words(len)) {
          bool ok = true;
          for (unsigned n = 0; n < len && ok; ++n)
            if (!((a >> n) & 1) && w[n] != (((p >> n) & 1) != 0)) ok = false;
          if (ok) generated.insert(w);
        }
      if (generated == t.nodes) return true;
    }
  return false;
}

// Oracle: some set A of lengths such that nodes split exactly at A and have
// exactly one child elsewhere.
bool uniform_oracle(const TreePrefix& t) {
  const unsigned d = t.depth;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << d); ++a) {
    bool ok = true;
    for (const auto& w : t.nodes) {
      if (w.size() >= d) continue;
      int kids = t.contains(w.appended(false)) + t.contains(w.appended(true));
      if (kids != (((a >> w.size()) & 1) ? 2 : 1)) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

TreePrefix extend_full(const TreePrefix& t, unsigned extra) {
  TreePrefix out = t;
  out.depth = t.depth + extra;
  for (const auto& leaf : t.level(t.depth))
    for (unsigned len = 1; len <= extra; ++len)
      for (const auto& tail : all_words(len)) out.nodes.insert(leaf.concat(tail));
  return out;
}

}  // namespace

TEST(Trees, DownwardClosureExamples) {
  EXPECT_EQ(downward_closure(std::vector<BitWord>{W("01")}).nodes, (std::set<BitWord>{BitWord(), W("0"), W("01")}));
  TreePrefix full = prefix(2, {"", "0", "1", "00", "01", "10", "11"});
  std::vector<BitWord> all(full.nodes.begin(), full.nodes.end());
  EXPECT_EQ(downward_closure(all).nodes, full.nodes);
  TreeSkeleton sk;
  sk.levels = 1;
  sk.stems = {{BitWord(), BitWord()}, {W("0"), W("00")}, {W("1"), W("10")}};
  EXPECT_EQ(downward_closure(sk).nodes, (std::set<BitWord>{BitWord(), W("0"), W("1"), W("00"), W("10")}));
}

TEST(Trees, BodyExamples) {
  TreePrefix full = prefix(2, {"", "0", "1", "00", "01", "10", "11"});
  EXPECT_EQ(body_at_depth(full, 2), ClopenSet::full(1, 2));
  ClopenSet b = body_at_depth(prefix(2, {"", "0", "1", "00", "11"}), 2);
  EXPECT_EQ(b.cells1(), (std::vector<BitWord>{W("00"), W("11")}));
  EXPECT_EQ(b.measure(), Dyadic::unit(1));
  EXPECT_TRUE(body_at_depth(TreePrefix{}, 0).is_empty());
  EXPECT_THROW(body_at_depth(full, 3), Error);
}

TEST(Trees, ClassifyExamples) {
  TreePrefix full = prefix(3, {});
  for (unsigned len = 0; len <= 3; ++len)
    for (const auto& w : all_words(len)) full.nodes.insert(w);
  TreeVerdict v = classify_prefix(full, TreeKind::Silver);
  ASSERT_TRUE(v.consistent);
  EXPECT_EQ(std::get<SilverWitness>(v.witness).free_positions, (std::vector<unsigned>{0, 1, 2}));

  TreePrefix twin = prefix(2, {"", "0", "1", "00", "11"});
  EXPECT_TRUE(consistent(twin, TreeKind::UniformlyPerfect));
  EXPECT_FALSE(consistent(twin, TreeKind::Silver));
  EXPECT_FALSE(silver_oracle(twin));

  TreePrefix left = prefix(2, {"", "0", "00", "01"});
  EXPECT_TRUE(consistent(left, TreeKind::Perfect));
  EXPECT_TRUE(consistent(left, TreeKind::UniformlyPerfect));

  TreePrefix lopsided = prefix(2, {"", "0", "1", "00", "01", "10"});
  TreeVerdict u = classify_prefix(lopsided, TreeKind::UniformlyPerfect);
  EXPECT_FALSE(u.consistent);
  EXPECT_EQ(u.node, W("1"));
}

TEST(Trees, DeadNodeAndBadInput) {
  TreePrefix dead = prefix(2, {"", "0", "1", "00"});
  TreeVerdict v = classify_prefix(dead, TreeKind::Perfect);
  EXPECT_FALSE(v.consistent);
  EXPECT_EQ(v.node, W("1"));
  EXPECT_THROW(classify_prefix(prefix(2, {"", "00"}), TreeKind::Perfect), Error);
  SilverWitness shortw{W("0"), {}};
  EXPECT_THROW(classify_prefix(prefix(2, {"", "0", "00"}), TreeKind::Silver, shortw), Error);
}

TEST(Trees, SilverWitnessChecked) {
  TreePrefix t = prefix(2, {"", "1", "10", "11"});
  EXPECT_TRUE(classify_prefix(t, TreeKind::Silver, SilverWitness{W("10"), {1}}).consistent);
  EXPECT_FALSE(classify_prefix(t, TreeKind::Silver, SilverWitness{W("00"), {1}}).consistent);
}

TEST(Trees, ExtractSilverExamples) {
  // τ_0 = 1, τ_1 = ∅; addresses interleave (j_0, i_0, j_1).
  TreeSkeleton sk;
  sk.levels = 1;
  std::map<BitWord, BranchLabel> labels;
  for (bool j0 : {false, true}) {
    BitWord t0 = j0 ? W("0") : W("1");
    BitWord a0;
    a0.push_back(j0);
    sk.stems[a0] = t0;
    labels[a0] = BranchLabel{BitWord(), a0};
    for (bool i0 : {false, true})
      for (bool j1 : {false, true}) {
        BitWord addr = a0;
        addr.push_back(i0);
        addr.push_back(j1);
        sk.stems[addr] = t0.appended(i0);
        BitWord i, j = a0;
        i.push_back(i0);
        j.push_back(j1);
        labels[addr] = BranchLabel{i, j};
      }
  }
  sk.labels = labels;
  TreeSkeleton sub = extract_silver_subtree(sk);
  EXPECT_EQ(sub.stems.at(W("0")), W("10"));
  EXPECT_EQ(sub.stems.at(W("1")), W("11"));
  TreePrefix closure = downward_closure(sub);
  closure.depth = 2;
  TreeVerdict v = classify_prefix(closure, TreeKind::Silver);
  ASSERT_TRUE(v.consistent);
  EXPECT_EQ(std::get<SilverWitness>(v.witness).free_positions, (std::vector<unsigned>{1}));
  for (const auto& [addr, stem] : sub.stems) {
    bool found = false;
    for (const auto& [a, s] : sk.stems) found |= s == stem;
    EXPECT_TRUE(found);
  }
  TreeSkeleton unlabeled;
  EXPECT_THROW(extract_silver_subtree(unlabeled), Error);
}

TEST(TreesProperty, SilverAndUniformMatchOracles) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    TreePrefix p = random_prefix(rng, 1 + rng() % 3);
    const bool perfect = no_dead_nodes(p);
    EXPECT_EQ(consistent(p, TreeKind::Perfect), perfect);
    EXPECT_EQ(consistent(p, TreeKind::Silver), perfect && silver_oracle(p));
    EXPECT_EQ(consistent(p, TreeKind::UniformlyPerfect), perfect && uniform_oracle(p));
  }
}

TEST(TreesProperty, KindImplicationsAndStability) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 300; ++t) {
    TreePrefix p = random_prefix(rng, 1 + rng() % 4);
    const bool silver = consistent(p, TreeKind::Silver);
    const bool uniform = consistent(p, TreeKind::UniformlyPerfect);
    if (silver) EXPECT_TRUE(uniform);
    if (uniform) EXPECT_TRUE(consistent(p, TreeKind::Perfect));
    TreeVerdict sp = classify_prefix(p, TreeKind::Spinas);
    if (sp.consistent) EXPECT_TRUE(consistent(p, TreeKind::Perfect));
    TreePrefix q = extend_full(p, 1 + rng() % 2);
    for (TreeKind k : {TreeKind::Perfect, TreeKind::UniformlyPerfect, TreeKind::Silver})
      EXPECT_EQ(consistent(q, k), consistent(p, k)) << tree_kind_name(k);
  }
}

TEST(Trees, FileRoundTrip) {
  TreePrefix t = prefix(2, {"", "1", "10", "11"});
  TreeVerdict v = classify_prefix(t, TreeKind::Silver);
  std::stringstream ss;
  write_tree(ss, t, v.witness);
  TreeFile back = read_tree(ss);
  EXPECT_EQ(back.prefix.nodes, t.nodes);
  EXPECT_EQ(back.prefix.depth, 2u);
  EXPECT_EQ(std::get<SilverWitness>(back.witness), std::get<SilverWitness>(v.witness));
  std::istringstream bad("tree x\n");
  EXPECT_THROW(read_tree(bad), Error);
}
