#include "cantor/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cantor/catengine.hpp"
#include "cantor/certificate.hpp"
#include "cantor/codings.hpp"
#include "cantor/errors.hpp"
#include "cantor/largesets.hpp"
#include "cantor/measengine.hpp"
#include "cantor/trees.hpp"
#include "cantor/verify.hpp"

namespace cantor {

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInput = 2;
constexpr int kConstruction = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DensityExhausted:
    case ErrorKind::InsufficientFiltration:
    case ErrorKind::EmptyPick:
    case ErrorKind::NoOffDiagonalCell:
    case ErrorKind::DepthCapExceeded:
      return kConstruction;
    default:
      return kInput;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto parse_file(const std::string& path, F&& reader) {
  std::istringstream in(slurp(path));
  return reader(in);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::ParseError, "cannot write " + path);
}

std::string cert_summary(const Certificate& c) {
  std::ostringstream out;
  out << variant_name(c.variant) << " stages=" << c.stages << " final_depth=" << c.final_depth
      << " body_measure=" << c.body_measure.str() << " tree_class=" << c.tree_class << '\n';
  return out.str();
}

struct Options {
  std::string variant;
  unsigned stages = 0;
  std::string input;
  std::string cert;
  std::string ideal;
  std::string out;
  std::string code;
  std::string formula;
  unsigned bound = 0;
  std::optional<unsigned> search;
  std::string point;
  std::string file;
  std::string kind;
  std::uint64_t seed = 0;
  unsigned depth = 0;
  std::size_t count = 6;
  std::size_t knockouts = 4;
  unsigned c = 6;
};

int do_inscribe_category(const Options& o) {
  DenseOpenFamily family = parse_file(o.input, read_dof);
  auto oracle = oracle_from_family(family);
  CategoryRun run = o.variant == "silver"   ? silver_category_inscribe(*oracle, o.stages)
                    : o.variant == "spinas" ? spinas_category_inscribe(*oracle, o.stages)
                                            : uniform_mycielski_category_inscribe(*oracle, o.stages);
  if (!o.cert.empty()) {
    emit(o.cert, serialize(run.certificate));
    std::cout << cert_summary(run.certificate);
  } else {
    std::cout << serialize(run.certificate);
  }
  return kOk;
}

int do_inscribe_measure(const Options& o) {
  Filtration filt = parse_file(o.input, read_filt);
  MeasureRun run = o.variant == "silver" ? silver_measure_inscribe(filt, o.stages)
                                         : uniform_mycielski_measure_inscribe(filt, o.stages);
  if (!o.cert.empty()) {
    emit(o.cert, serialize(run.certificate));
    std::cout << cert_summary(run.certificate);
  } else {
    std::cout << serialize(run.certificate);
  }
  return kOk;
}

int do_verify(const Options& o) {
  Certificate cert = parse_certificate(slurp(o.cert));
  VerifyReport report = is_category(cert.variant) ? verify_certificate(cert, parse_file(o.input, read_dof))
                                                  : verify_certificate(cert, parse_file(o.input, read_filt));
  std::cout << format_report(report) << '\n';
  return report.pass ? kOk : kViolation;
}

int do_encode(const Options& o) {
  Presentation p = parse_file(o.input, read_presentation);
  if (ideal_name(p.ideal) != o.ideal)
    throw Error(ErrorKind::MalformedPresentation,
                "presentation is for ideal " + ideal_name(p.ideal) + ", --ideal says " + o.ideal);
  Code code = encode(p);
  std::ostringstream text;
  write_code(text, code);
  emit(o.out, text.str());
  if (!o.out.empty() && o.out != "-")
    std::cout << "encoded " << ideal_name(code.ideal) << " code with " << code.indexed.size() + code.flat.size()
              << " entries\n";
  return kOk;
}

int do_check_code(const Options& o) {
  Code code = parse_file(o.code, read_code);
  if (o.formula == "phi") {
    Verdict v = phi_check(code, o.bound, o.search);
    std::cout << describe(v) << '\n';
    return v.status == VerdictStatus::Refuted ? kViolation : kOk;
  }
  if (o.point.empty()) throw Error(ErrorKind::ParseError, "--formula psi needs --point");
  Verdict v = psi_member(code, Point::parse(o.point), o.bound);
  std::cout << describe(v) << '\n';
  return kOk;
}

int do_tree_classify(const Options& o) {
  TreeFile file = parse_file(o.file, read_tree);
  TreeVerdict v = classify_prefix(file.prefix, parse_tree_kind(o.kind), file.witness);
  if (v.consistent) {
    std::cout << "consistent " << o.kind << '\n';
    return kOk;
  }
  std::cout << "violated " << o.kind << " node " << v.node.str() << ": " << v.reason << '\n';
  return kViolation;
}

int do_gen(const Options& o) {
  std::ostringstream text;
  if (o.kind == "dense-open") {
    write_dof(text, random_dense_open(o.seed, DenseOpenParams{o.depth, o.count, o.knockouts}));
  } else {
    write_filt(text, random_filtration(o.seed, FiltrationParams{o.depth, o.c}));
  }
  emit(o.out, text.str());
  return kOk;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"Finite-depth inscription of large rectangles in Cantor space"};
  app.require_subcommand(1);
  app.footer(
      "Grammars:\n"
      "  inscribe category --variant silver|spinas|uniform --stages K --input X.dof [--cert out.cert]\n"
      "  inscribe measure --variant silver|uniform --stages K --input X.filt [--cert out.cert]\n"
      "  verify --cert C --input X\n"
      "  encode --ideal M|N|E|M+|N+|E+ --input P.pres [--out C.code]\n"
      "  check-code --code C --formula phi|psi --bound B [--search S] [--point BITS]\n"
      "  tree classify --file T.tree --kind perfect|uniformly-perfect|silver|spinas\n"
      "  gen --seed S --kind dense-open|filtration --depth D [--out F]\n"
      "Exit codes: 0 pass, 1 violation or refuted formula, 2 input or format error, 3 construction failure.\n"
      "CANTOR_DEPTH_CAP=a or a,b overrides the dim-1 and dim-2 depth caps.");
  Options o;
  int (*action)(const Options&) = nullptr;

  auto* inscribe = app.add_subcommand("inscribe", "Run a construction and write its certificate");
  inscribe->require_subcommand(1);
  auto* cat = inscribe->add_subcommand("category", "Dense-open (category) constructions");
  cat->add_option("--variant", o.variant)->required()->check(CLI::IsMember({"silver", "spinas", "uniform"}));
  cat->add_option("--stages", o.stages, "Number K of stages after stage 0")->required();
  cat->add_option("--input", o.input, "Dense-open family (.dof)")->required()->check(CLI::ExistingFile);
  cat->add_option("--cert", o.cert, "Certificate output; stdout when omitted");
  cat->callback([&] { action = do_inscribe_category; });

  auto* meas = inscribe->add_subcommand("measure", "Measure constructions over a filtration");
  meas->add_option("--variant", o.variant)->required()->check(CLI::IsMember({"silver", "uniform"}));
  meas->add_option("--stages", o.stages, "Number K of stages after stage 0")->required();
  meas->add_option("--input", o.input, "Filtration (.filt)")->required()->check(CLI::ExistingFile);
  meas->add_option("--cert", o.cert, "Certificate output; stdout when omitted");
  meas->callback([&] { action = do_inscribe_measure; });

  auto* ver = app.add_subcommand("verify", "Check a certificate against its instance");
  ver->add_option("--cert", o.cert)->required()->check(CLI::ExistingFile);
  ver->add_option("--input", o.input, "The .dof or .filt the certificate was built from")
      ->required()
      ->check(CLI::ExistingFile);
  ver->callback([&] { action = do_verify; });

  auto* enc = app.add_subcommand("encode", "Encode a presentation (.pres) as a code table");
  enc->add_option("--ideal", o.ideal)->required()->check(CLI::IsMember({"M", "N", "E", "M+", "N+", "E+"}));
  enc->add_option("--input", o.input)->required()->check(CLI::ExistingFile);
  enc->add_option("--out", o.out, "Code output; stdout when omitted");
  enc->callback([&] { action = do_encode; });

  auto* chk = app.add_subcommand("check-code", "Bounded evaluation of phi or psi on a code");
  chk->add_option("--code", o.code)->required()->check(CLI::ExistingFile);
  chk->add_option("--formula", o.formula)->required()->check(CLI::IsMember({"phi", "psi"}));
  chk->add_option("--bound", o.bound)->required();
  chk->add_option("--search", o.search, "Existential search bound (default: exhaustive)");
  chk->add_option("--point", o.point, "Point for psi: bits, or bits(0)/bits(1) for a constant tail");
  chk->callback([&] { action = do_check_code; });

  auto* tree = app.add_subcommand("tree", "Tree prefix utilities");
  tree->require_subcommand(1);
  auto* cls = tree->add_subcommand("classify", "Classify a tree prefix (.tree)");
  cls->add_option("--file", o.file)->required()->check(CLI::ExistingFile);
  cls->add_option("--kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"perfect", "uniformly-perfect", "silver", "spinas"}));
  cls->callback([&] { action = do_tree_classify; });

  auto* gen = app.add_subcommand("gen", "Generate a seeded instance");
  gen->add_option("--seed", o.seed)->required();
  gen->add_option("--kind", o.kind)->required()->check(CLI::IsMember({"dense-open", "filtration"}));
  gen->add_option("--depth", o.depth)->required();
  gen->add_option("--out", o.out, "Output file; stdout when omitted");
  gen->add_option("--count", o.count, "dense-open: number of levels")->capture_default_str();
  gen->add_option("--knockouts", o.knockouts, "dense-open: cells removed per level")->capture_default_str();
  gen->add_option("--c", o.c, "filtration: measure offset c")->capture_default_str();
  gen->callback([&] { action = do_gen; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    return action ? action(o) : kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}

}  // namespace cantor
