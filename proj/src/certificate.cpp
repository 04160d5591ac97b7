#include "cantor/certificate.hpp"

#include <algorithm>
#include <set>

#include "cantor/errors.hpp"
#include "cantor/largesets.hpp"

namespace cantor {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::SilverCat: return "silver-cat";
    case Variant::SpinasCat: return "spinas-cat";
    case Variant::UniformCat: return "uniform-cat";
    case Variant::SilverMeas: return "silver-meas";
    case Variant::UniformMeas: return "uniform-meas";
  }
  return "silver-cat";
}

Variant parse_variant(const std::string& text) {
  for (auto v : {Variant::SilverCat, Variant::SpinasCat, Variant::UniformCat, Variant::SilverMeas,
                 Variant::UniformMeas}) {
    if (variant_name(v) == text) return v;
  }
  throw Error(ErrorKind::MalformedCertificate, "unknown variant '" + text + "'");
}

Rational epsilon(unsigned k) {
  return Rational(BigInt(1), (BigInt(1) << (2 * k + 2)) * (k + 1));
}

void fill_summary(Certificate& cert) {
  const unsigned K = cert.stages;
  std::set<BitWord> top;
  std::size_t len = 0;
  const bool interleaved = cert.skeleton.labels.has_value();
  for (const auto& [addr, stem] : cert.skeleton.stems) {
    if (addr.size() == (interleaved ? 2 * K + 1 : K)) {
      top.insert(stem);
      len = std::max(len, stem.size());
    }
  }
  cert.final_depth = static_cast<unsigned>(len);
  cert.body_measure = Dyadic(BigInt(top.size()), cert.final_depth);
  cert.final_h_measures.clear();
  cert.facts.clear();
  switch (cert.variant) {
    case Variant::SilverCat:
      cert.tree_class = "silver";
      cert.facts = {"V_n is contained in S_n for n <= K",
                    "[tau_0 i_0 ... tau_n] x V_n is contained in U_n for n <= K and every i",
                    "the closure of the skeleton is silver-consistent at the final depth"};
      cert.closed_form = "B = intersection over n of the union over m >= n of V_m";
      break;
    case Variant::SpinasCat:
      cert.tree_class = "spinas";
      cert.facts = {"V_n is contained in S_n for n <= K",
                    "[tau(i,j) tau_n^(j_n)] x V_n is contained in U_n for n <= K and every (i, j)",
                    "the closure of the skeleton is spinas-consistent at the final depth",
                    "the j = 0 branches form a silver-consistent subtree"};
      cert.closed_form = "B = intersection over n of the union over m >= n of V_m";
      break;
    case Variant::UniformCat:
      cert.tree_class = "uniformly-perfect";
      cert.facts = {"conditions (i)-(v) hold for n <= K",
                    "off-diagonal cells of body x (V_k or body) are covered by (iii) or (v)",
                    "the closure of the skeleton is uniformly-perfect-consistent at the final depth"};
      cert.closed_form = "D = intersection over n of the union over k >= n of (V_k or the union of [sigma_tau], |tau| = k)";
      break;
    case Variant::SilverMeas:
    case Variant::UniformMeas: {
      const bool uniform = cert.variant == Variant::UniformMeas;
      cert.tree_class = uniform ? "uniformly-perfect" : "silver";
      if (!cert.measure.empty()) {
        for (const auto& h : cert.measure.back().H) cert.final_h_measures.push_back(h.measure());
      }
      cert.facts = {uniform ? "conditions 1)-5) hold for k <= K" : "conditions 1)-4) hold for k <= K",
                    "lambda(H_{j,K}) is at least the truncated product bound"};
      if (!cert.measure.empty() && cert.measure.back().N >= cert.filtration_depth) {
        cert.facts.push_back("body x H_{j,K} is contained in F_{n_j} cellwise for j <= K");
      }
      if (uniform) cert.facts.push_back("off-diagonal body rectangles meet F_{n_d} with the condition-5 bound");
      cert.closed_form = uniform ? "B = [T] union the union over j of the intersection over k >= j of H_{j,k}"
                                 : "H = the union over j of the intersection over k >= j of H_{j,k}";
      break;
    }
  }
}

namespace {

[[noreturn]] void malformed(const std::string& msg) { throw Error(ErrorKind::MalformedCertificate, msg); }

void expect_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) malformed(where + " must be an object");
  if (j.size() != keys.size()) malformed(where + " has " + std::to_string(j.size()) + " keys, expected " + std::to_string(keys.size()));
  for (const char* k : keys) {
    if (!j.contains(k)) malformed(where + " lacks key '" + k + "'");
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) malformed(where + " lacks key '" + key + "'");
  return j.at(key);
}

std::string get_string(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) malformed(where + "." + key + " must be a string");
  return v.get<std::string>();
}

unsigned get_nat(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 1000000) malformed(where + "." + key + " must be a natural number");
  return static_cast<unsigned>(v.get<std::uint64_t>());
}

BitWord word_of(const Json& v, const std::string& where) {
  if (!v.is_string()) malformed(where + " must be a word string");
  try {
    return BitWord(v.get<std::string>());
  } catch (const Error& e) {
    malformed(where + ": " + e.what());
  }
}

BitWord get_word(const Json& j, const char* key, const std::string& where) {
  return word_of(field(j, key, where), where + "." + key);
}

Dyadic dyadic_of(const Json& v, const std::string& where) {
  if (!v.is_string()) malformed(where + " must be a 'p/2^q' string");
  try {
    return Dyadic::parse(v.get<std::string>());
  } catch (const Error& e) {
    malformed(where + ": " + e.what());
  }
}

const Json& get_array(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_array()) malformed(where + "." + key + " must be an array");
  return v;
}

Json word_map_to_json(const std::map<BitWord, BitWord>& m) {
  Json arr = Json::array();
  for (const auto& [tau, stem] : m) arr.push_back(Json{{"tau", tau.str()}, {"stem", stem.str()}});
  return arr;
}

std::map<BitWord, BitWord> word_map_from_json(const Json& arr, const std::string& where) {
  std::map<BitWord, BitWord> m;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    expect_keys(arr[i], {"tau", "stem"}, w);
    auto tau = get_word(arr[i], "tau", w);
    if (!m.emplace(tau, get_word(arr[i], "stem", w)).second) malformed(w + " repeats address " + tau.str());
  }
  return m;
}

Json words_to_json(const std::vector<BitWord>& ws) {
  Json arr = Json::array();
  for (const auto& w : ws) arr.push_back(w.str());
  return arr;
}

std::vector<BitWord> words_from_json(const Json& arr, const std::string& where) {
  std::vector<BitWord> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(word_of(arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json query_to_json(const OracleQuery& q) {
  return Json{{"level", q.level},
              {"sigma", q.sigma.str()},
              {"rho", q.rho.str()},
              {"sigma-out", q.sigma_out.str()},
              {"rho-out", q.rho_out.str()}};
}

OracleQuery query_from_json(const Json& j, const std::string& where) {
  expect_keys(j, {"level", "sigma", "rho", "sigma-out", "rho-out"}, where);
  OracleQuery q;
  q.level = get_nat(j, "level", where);
  q.sigma = get_word(j, "sigma", where);
  q.rho = get_word(j, "rho", where);
  q.sigma_out = get_word(j, "sigma-out", where);
  q.rho_out = get_word(j, "rho-out", where);
  return q;
}

Json category_stage_to_json(const CategoryStageRecord& s, Variant v) {
  Json j;
  j["n"] = s.n;
  j["base"] = s.base.str();
  if (v != Variant::UniformCat) j["tau"] = s.tau.str();
  j["V"] = s.v.str();
  if (v == Variant::UniformCat) {
    j["sigma"] = word_map_to_json(s.sigma);
    j["sigma-pre"] = word_map_to_json(s.sigma_pre);
    j["chain"] = words_to_json(s.chain);
  }
  Json qs = Json::array();
  for (const auto& q : s.queries) qs.push_back(query_to_json(q));
  j["queries"] = qs;
  return j;
}

CategoryStageRecord category_stage_from_json(const Json& j, Variant v, const std::string& where) {
  if (v == Variant::UniformCat) {
    expect_keys(j, {"n", "base", "V", "sigma", "sigma-pre", "chain", "queries"}, where);
  } else {
    expect_keys(j, {"n", "base", "tau", "V", "queries"}, where);
  }
  CategoryStageRecord s;
  s.n = get_nat(j, "n", where);
  s.base = get_word(j, "base", where);
  if (v != Variant::UniformCat) s.tau = get_word(j, "tau", where);
  s.v = get_word(j, "V", where);
  if (v == Variant::UniformCat) {
    s.sigma = word_map_from_json(get_array(j, "sigma", where), where + ".sigma");
    s.sigma_pre = word_map_from_json(get_array(j, "sigma-pre", where), where + ".sigma-pre");
    s.chain = words_from_json(get_array(j, "chain", where), where + ".chain");
  }
  const Json& qs = get_array(j, "queries", where);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    s.queries.push_back(query_from_json(qs[i], where + ".queries[" + std::to_string(i) + "]"));
  }
  return s;
}

Json measure_stage_to_json(const MeasureStageRecord& s, Variant v) {
  Json j;
  j["k"] = s.k;
  j["N"] = s.N;
  j["epsilon"] = rational_str(s.eps);
  j["sigma"] = word_map_to_json(s.sigma);
  Json hs = Json::array();
  for (const auto& h : s.H) hs.push_back(clopen_to_json(h));
  j["H"] = hs;
  j["n"] = s.n_index;
  if (s.k > 0) {
    j["picks"] = words_to_json(s.picks);
    Json sl = Json::array();
    for (const auto& x : s.slices) sl.push_back(Json{{"j", x.j}, {"tau", x.tau.str()}, {"measure", x.measure.str()}});
    j["slices"] = sl;
    j["pick-set-measure"] = s.pick_set_measure.value_or(Dyadic()).str();
    if (v == Variant::UniformMeas) j["pair-set-measure"] = s.pair_set_measure.value_or(Dyadic()).str();
  }
  return j;
}

MeasureStageRecord measure_stage_from_json(const Json& j, Variant v, const std::string& where) {
  MeasureStageRecord s;
  s.k = get_nat(j, "k", where);
  if (s.k == 0) {
    expect_keys(j, {"k", "N", "epsilon", "sigma", "H", "n"}, where);
  } else if (v == Variant::UniformMeas) {
    expect_keys(j, {"k", "N", "epsilon", "sigma", "H", "n", "picks", "slices", "pick-set-measure", "pair-set-measure"},
                where);
  } else {
    expect_keys(j, {"k", "N", "epsilon", "sigma", "H", "n", "picks", "slices", "pick-set-measure"}, where);
  }
  s.N = get_nat(j, "N", where);
  try {
    s.eps = parse_rational(get_string(j, "epsilon", where));
  } catch (const Error& e) {
    malformed(where + ".epsilon: " + e.what());
  }
  s.sigma = word_map_from_json(get_array(j, "sigma", where), where + ".sigma");
  const Json& hs = get_array(j, "H", where);
  for (std::size_t i = 0; i < hs.size(); ++i) s.H.push_back(clopen_from_json(hs[i]));
  s.n_index = get_nat(j, "n", where);
  if (s.k > 0) {
    s.picks = words_from_json(get_array(j, "picks", where), where + ".picks");
    const Json& sl = get_array(j, "slices", where);
    for (std::size_t i = 0; i < sl.size(); ++i) {
      const std::string w = where + ".slices[" + std::to_string(i) + "]";
      expect_keys(sl[i], {"j", "tau", "measure"}, w);
      s.slices.push_back({get_nat(sl[i], "j", w), get_word(sl[i], "tau", w), dyadic_of(sl[i]["measure"], w + ".measure")});
    }
    s.pick_set_measure = dyadic_of(j["pick-set-measure"], where + ".pick-set-measure");
    if (v == Variant::UniformMeas) s.pair_set_measure = dyadic_of(j["pair-set-measure"], where + ".pair-set-measure");
  }
  return s;
}

}  // namespace

Json clopen_to_json(const ClopenSet& set) {
  Json j;
  j["depth"] = set.depth();
  j["cylinders"] = words_to_json(cylinder_decomposition(set));
  j["measure"] = set.measure().str();
  return j;
}

ClopenSet clopen_from_json(const Json& j) {
  expect_keys(j, {"depth", "cylinders", "measure"}, "clopen set");
  const unsigned depth = get_nat(j, "depth", "clopen set");
  if (depth > depth_caps().dim1) malformed("clopen set depth " + std::to_string(depth) + " beyond the cap");
  ClopenSet s(1, depth);
  for (const auto& w : words_from_json(get_array(j, "cylinders", "clopen set"), "clopen set.cylinders")) {
    if (w.size() > depth) malformed("cylinder " + w.str() + " deeper than its set");
    s.insert_cylinder(w);
  }
  if (s.measure() != dyadic_of(j["measure"], "clopen set.measure")) malformed("clopen set measure disagrees with its cells");
  return s;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["variant"] = variant_name(cert.variant);
  j["input-digest"] = cert.input_digest;
  Json params;
  params["stages"] = cert.stages;
  if (!is_category(cert.variant)) params["filtration-depth"] = cert.filtration_depth;
  j["parameters"] = params;
  Json stages = Json::array();
  if (is_category(cert.variant)) {
    for (const auto& s : cert.category) stages.push_back(category_stage_to_json(s, cert.variant));
  } else {
    for (const auto& s : cert.measure) stages.push_back(measure_stage_to_json(s, cert.variant));
  }
  j["stages"] = stages;
  Json sk;
  sk["levels"] = cert.skeleton.levels;
  Json stems = Json::array();
  for (const auto& [addr, stem] : cert.skeleton.stems) stems.push_back(Json{{"address", addr.str()}, {"stem", stem.str()}});
  sk["stems"] = stems;
  if (cert.skeleton.labels) {
    Json labels = Json::array();
    for (const auto& [addr, l] : *cert.skeleton.labels) {
      labels.push_back(Json{{"address", addr.str()}, {"i", l.i.str()}, {"j", l.j.str()}});
    }
    sk["labels"] = labels;
  }
  j["skeleton"] = sk;
  Json summary;
  summary["final-depth"] = cert.final_depth;
  summary["body-measure"] = cert.body_measure.str();
  summary["tree-class"] = cert.tree_class;
  if (!is_category(cert.variant)) {
    Json hm = Json::array();
    for (const auto& m : cert.final_h_measures) hm.push_back(m.str());
    summary["H-measures"] = hm;
  }
  Json facts = Json::array();
  for (const auto& f : cert.facts) facts.push_back(f);
  summary["facts"] = facts;
  summary["closed-form"] = cert.closed_form;
  j["summary"] = summary;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  expect_keys(j, {"variant", "input-digest", "parameters", "stages", "skeleton", "summary"}, "certificate");
  Certificate c;
  c.variant = parse_variant(get_string(j, "variant", "certificate"));
  c.input_digest = get_string(j, "input-digest", "certificate");
  const Json& params = field(j, "parameters", "certificate");
  if (is_category(c.variant)) {
    expect_keys(params, {"stages"}, "parameters");
  } else {
    expect_keys(params, {"stages", "filtration-depth"}, "parameters");
    c.filtration_depth = get_nat(params, "filtration-depth", "parameters");
  }
  c.stages = get_nat(params, "stages", "parameters");
  const Json& stages = get_array(j, "stages", "certificate");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const std::string where = "stages[" + std::to_string(i) + "]";
    if (is_category(c.variant)) {
      c.category.push_back(category_stage_from_json(stages[i], c.variant, where));
    } else {
      c.measure.push_back(measure_stage_from_json(stages[i], c.variant, where));
    }
  }
  const Json& sk = field(j, "skeleton", "certificate");
  if (c.variant == Variant::SpinasCat) {
    expect_keys(sk, {"levels", "stems", "labels"}, "skeleton");
  } else {
    expect_keys(sk, {"levels", "stems"}, "skeleton");
  }
  c.skeleton.levels = get_nat(sk, "levels", "skeleton");
  const Json& stems = get_array(sk, "stems", "skeleton");
  for (std::size_t i = 0; i < stems.size(); ++i) {
    const std::string w = "skeleton.stems[" + std::to_string(i) + "]";
    expect_keys(stems[i], {"address", "stem"}, w);
    auto addr = get_word(stems[i], "address", w);
    if (!c.skeleton.stems.emplace(addr, get_word(stems[i], "stem", w)).second) malformed(w + " repeats an address");
  }
  if (c.variant == Variant::SpinasCat) {
    std::map<BitWord, BranchLabel> labels;
    const Json& ls = get_array(sk, "labels", "skeleton");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const std::string w = "skeleton.labels[" + std::to_string(i) + "]";
      expect_keys(ls[i], {"address", "i", "j"}, w);
      auto addr = get_word(ls[i], "address", w);
      if (!labels.emplace(addr, BranchLabel{get_word(ls[i], "i", w), get_word(ls[i], "j", w)}).second) {
        malformed(w + " repeats an address");
      }
    }
    c.skeleton.labels = std::move(labels);
  }
  const Json& sm = field(j, "summary", "certificate");
  if (is_category(c.variant)) {
    expect_keys(sm, {"final-depth", "body-measure", "tree-class", "facts", "closed-form"}, "summary");
  } else {
    expect_keys(sm, {"final-depth", "body-measure", "tree-class", "H-measures", "facts", "closed-form"}, "summary");
    const Json& hm = get_array(sm, "H-measures", "summary");
    for (std::size_t i = 0; i < hm.size(); ++i) c.final_h_measures.push_back(dyadic_of(hm[i], "summary.H-measures"));
  }
  c.final_depth = get_nat(sm, "final-depth", "summary");
  c.body_measure = dyadic_of(sm["body-measure"], "summary.body-measure");
  c.tree_class = get_string(sm, "tree-class", "summary");
  const Json& facts = get_array(sm, "facts", "summary");
  for (const auto& f : facts) {
    if (!f.is_string()) malformed("summary.facts entries must be strings");
    c.facts.push_back(f.get<std::string>());
  }
  c.closed_form = get_string(sm, "closed-form", "summary");
  return c;
}

std::string serialize(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

Certificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

}  // namespace cantor
