#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrs/codec.hpp"
#include "lrs/scheme.hpp"

namespace lrs::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

Seed resolve_seed(const std::string& flag) {
  if (!flag.empty()) return seed_from_hex(flag);
  if (const char* env = std::getenv("LRS_SEED"); env && *env) return seed_from_hex(env);
  throw Failure{2, "no seed: pass --seed or set LRS_SEED"};
}

std::vector<std::uint8_t> parse_message(const std::string& hex, std::size_t t) {
  const std::size_t bytes = (t + 7) / 8;
  if (hex.size() != 2 * bytes) {
    throw Failure{2, "message must be " + std::to_string(2 * bytes) + " hex digits for t = " + std::to_string(t)};
  }
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < bytes; ++i) {
    unsigned v = 0;
    for (std::size_t j = 0; j < 2; ++j) {
      const char c = hex[2 * i + j];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw Failure{2, "message is not hex"};
      v = v * 16 + static_cast<unsigned>(d);
    }
    for (int b = 7; b >= 0; --b) {
      const std::size_t idx = 8 * i + static_cast<std::size_t>(7 - b);
      const std::uint8_t bit = (v >> b) & 1;
      if (idx < t) bits.push_back(bit);
      else if (bit) throw Failure{2, "message has nonzero bits beyond t"};
    }
  }
  return bits;
}

std::string hex(const Digest& d) { return to_hex(d.data(), d.size()); }

PublicParams load_params(const std::string& path) { return parse_params(read_file(path)); }

void print_params(std::ostream& out, const PublicParams& pp) {
  out << "preset: " << preset_name(pp.preset) << "\n"
      << "n: " << pp.n << "\nm: " << pp.m << "\nq: " << pp.q << "\nk: " << pp.k << "\nt: " << pp.t << "\n"
      << std::setprecision(6) << "sigma: " << pp.sigma << "\nsigma_prime: " << pp.sigma_prime << "\n"
      << "prf: " << pp.prf.name << " (" << pp.prf.circuit.gates().size() << " gates, depth "
      << pp.prf.circuit.depth() << ")\n"
      << "toy: " << (pp.toy ? "yes" : "no") << "\n";
  if (pp.toy) out << "WARNING: toy parameters, no security\n";
  if (!pp.executable()) out << "note: modulus too large to execute; parameters are for reporting only\n";
}

std::string magic_of(const std::vector<std::uint8_t>& bytes) {
  for (const char* m : {"LRSTAPE1", "LRSRING1", "LRSPAR1", "LRSVK01", "LRSSK01", "LRSSIG1", "LRSCIR1"}) {
    const std::string s(m);
    if (bytes.size() >= s.size() && std::equal(s.begin(), s.end(), bytes.begin())) return s;
  }
  return "";
}

int inspect(const std::string& file, bool check, const std::string& params_path, const std::string& vk_path,
            std::ostream& out) {
  const std::vector<std::uint8_t> bytes = read_file(file);
  const std::string magic = magic_of(bytes);
  std::vector<std::string> problems;
  auto need_params = [&]() -> PublicParams {
    if (params_path.empty()) throw Failure{2, magic + " needs --params for this operation"};
    return load_params(params_path);
  };
  out << "format: " << (magic.empty() ? "unknown" : magic) << "\n";
  if (magic.empty()) throw Failure{2, "unrecognized file format"};

  if (magic == "LRSPAR1") {
    const PublicParams pp = parse_params(bytes);
    print_params(out, pp);
    out << "setup digest: " << hex(pp.setup_digest) << "\n";
    if (check) problems = check_params(pp);
  } else if (magic == "LRSCIR1") {
    const PrfSpec spec = parse_circuit(bytes);
    out << "k: " << spec.k << "\nt: " << spec.t << "\ngates: " << spec.circuit.gates().size()
        << "\ndepth: " << spec.circuit.depth() << "\n";
  } else if (magic == "LRSTAPE1") {
    const RandomTape t = parse_tape(bytes);
    out << "seed: " << to_hex(t.seed().data(), t.seed().size()) << "\nwords: " << t.explicit_size() << "\n";
  } else if (magic == "LRSSIG1") {
    const Signature sig = parse_signature(bytes);
    out << "N: " << sig.n_ring << "\nm: " << sig.m << "\nlength: " << sig.x.size() << "\n"
        << std::setprecision(8) << "norm: " << static_cast<double>(signature_norm(sig)) << "\n";
    if (check) {
      bool zero = true;
      for (auto v : sig.x) zero = zero && v == 0;
      if (zero) problems.push_back("zero signature");
      if (!params_path.empty()) {
        const PublicParams pp = load_params(params_path);
        const long double bound = pp.sigma_prime * std::sqrt(static_cast<long double>(sig.x.size()));
        if (sig.m != pp.m) problems.push_back("m differs from parameters");
        if (signature_norm(sig) > bound) problems.push_back("norm exceeds sigma' sqrt(2 N m)");
      }
    }
  } else if (magic == "LRSVK01") {
    const PublicParams pp = need_params();
    const VerificationKey vk = parse_vk(pp, bytes);
    out << "n: " << pp.n << "\nm: " << pp.m << "\nq: " << pp.q << "\nB matrices: " << vk.b.size()
        << "\nfingerprint: " << hex(vk.fingerprint) << "\n";
    if (check && rank_mod(vk.a) < pp.n) problems.push_back("A lacks full row rank");
  } else if (magic == "LRSSK01") {
    const SigningKey sk = parse_sk(bytes);
    out << "m: " << sk.s.rows() << "\nkey bits: " << sk.prf_key.size() << "\nvk fingerprint: " << hex(sk.vk_fingerprint)
        << "\n";
    if (check) {
      if (vk_path.empty()) throw Failure{2, "checking a signing key needs --params and --vk"};
      const PublicParams pp = need_params();
      const VerificationKey vk = parse_vk(pp, read_file(vk_path));
      if (vk.fingerprint != sk.vk_fingerprint) problems.push_back("fingerprint does not match the verification key");
      if (sk.prf_key.size() != pp.k) problems.push_back("PRF key length differs from k");
      try {
        check_trapdoor(vk.a, sk.s);
      } catch (const Error& e) {
        problems.push_back(std::string("trapdoor: ") + e.what());
      }
      if (problems.empty()) {
        long double worst = 0;
        for (long double v : gs_norms_sq_approx(sk.s)) worst = std::max(worst, v);
        const long double bound = trap_gen_bound(pp.n, pp.m, pp.q64());
        out << "gs norm: " << static_cast<double>(std::sqrt(worst)) << " (bound " << static_cast<double>(bound) << ")\n";
        if (std::sqrt(worst) > bound) problems.push_back("Gram-Schmidt norm exceeds the trapdoor bound");
      }
    }
  } else if (magic == "LRSRING1") {
    const PublicParams pp = need_params();
    const Ring ring = parse_ring(pp, bytes);
    out << "N: " << ring.size() << "\n";
    for (std::size_t i = 0; i < ring.size(); ++i) out << "member " << i << ": " << hex(ring.members[i].fingerprint) << "\n";
    if (check) {
      try {
        check_ring(pp, ring);
      } catch (const Error& e) {
        problems.push_back(e.what());
      }
    }
  }
  if (check) {
    for (const std::string& p : problems) out << "violation: " << p << "\n";
    out << (problems.empty() ? "check: ok\n" : "check: FAILED\n");
    return problems.empty() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice ring signatures with unclaimable anonymity"};
  app.require_subcommand(1);

  std::string seed_hex, params_path, out_path, ring_path, sk_path, vk_path, msg_hex, sig_path, tape_path, file_path;
  std::string out_vk, out_sk, preset = "toy";
  std::size_t n = 4, k = 4, t = 4, n_max = 5, rounds = 2;
  double delta = 0.5;
  bool check = false;
  std::vector<std::string> vk_paths;

  auto* params = app.add_subcommand("params", "Generate public parameters");
  params->add_option("--n", n, "Lattice dimension")->required();
  params->add_option("--preset", preset, "toy or paper-asymptotic")->check(CLI::IsMember({"toy", "paper-asymptotic"}));
  params->add_option("--delta", delta, "Exponent slack for the asymptotic preset");
  params->add_option("--k", k, "PRF key bits");
  params->add_option("--t", t, "Message bits");
  params->add_option("--rounds", rounds, "Toy PRF mixing layers");
  params->add_option("--nmax", n_max, "Largest ring size the parameters support");
  params->add_option("--seed", seed_hex, "Setup seed (hex)");
  params->add_option("--out", out_path, "Output file")->required();

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  keygen_cmd->add_option("--params", params_path)->required();
  keygen_cmd->add_option("--seed", seed_hex);
  keygen_cmd->add_option("--out-vk", out_vk)->required();
  keygen_cmd->add_option("--out-sk", out_sk)->required();

  auto* ring_cmd = app.add_subcommand("ring", "Assemble a ring from verification keys");
  ring_cmd->add_option("--params", params_path)->required();
  ring_cmd->add_option("--vk", vk_paths, "Verification key (repeat, in ring order)")->required();
  ring_cmd->add_option("--out", out_path)->required();

  auto* sign_cmd = app.add_subcommand("sign", "Sign a message");
  sign_cmd->add_option("--params", params_path)->required();
  sign_cmd->add_option("--ring", ring_path)->required();
  sign_cmd->add_option("--sk", sk_path)->required();
  sign_cmd->add_option("--msg-hex", msg_hex)->required();
  auto* seed_opt = sign_cmd->add_option("--seed", seed_hex);
  sign_cmd->add_option("--seed-tape", tape_path, "Explicit tape file")->excludes(seed_opt);
  sign_cmd->add_option("--out", out_path)->required();

  auto* verify_cmd = app.add_subcommand("verify", "Verify a signature");
  verify_cmd->add_option("--params", params_path)->required();
  verify_cmd->add_option("--ring", ring_path)->required();
  verify_cmd->add_option("--msg-hex", msg_hex)->required();
  verify_cmd->add_option("--sig", sig_path)->required();

  auto* explain_cmd = app.add_subcommand("explain", "Produce signing randomness attributing a signature to a member");
  explain_cmd->add_option("--params", params_path)->required();
  explain_cmd->add_option("--ring", ring_path)->required();
  explain_cmd->add_option("--sig", sig_path)->required();
  explain_cmd->add_option("--sk", sk_path)->required();
  explain_cmd->add_option("--msg-hex", msg_hex)->required();
  explain_cmd->add_option("--seed", seed_hex);
  explain_cmd->add_option("--out-tape", tape_path)->required();

  auto* inspect_cmd = app.add_subcommand("inspect", "Print and optionally validate an artifact");
  inspect_cmd->add_option("--file", file_path)->required();
  inspect_cmd->add_flag("--check", check, "Validate invariants");
  inspect_cmd->add_option("--params", params_path, "Parameters, for key, ring and signature files");
  inspect_cmd->add_option("--vk", vk_path, "Matching verification key, for signing key checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*params) {
      SetupOptions opt;
      opt.n = n;
      opt.preset = parse_preset(preset);
      opt.k = k;
      opt.t = t;
      opt.rounds = rounds;
      opt.n_max = n_max;
      opt.delta = delta;
      const PublicParams pp = setup(opt, RandomTape(resolve_seed(seed_hex), "setup"));
      write_file(out_path, serialize_params(pp));
      print_params(out, pp);
      return 0;
    }
    if (*keygen_cmd) {
      const PublicParams pp = load_params(params_path);
      RandomTape tape(resolve_seed(seed_hex), "keygen");
      const KeyPair kp = keygen(pp, tape);
      write_file(out_vk, serialize_vk(pp, kp.vk));
      write_file(out_sk, serialize_sk(kp.sk));
      out << "fingerprint: " << hex(kp.vk.fingerprint) << "\n";
      return 0;
    }
    if (*ring_cmd) {
      const PublicParams pp = load_params(params_path);
      Ring ring;
      for (const std::string& p : vk_paths) ring.members.push_back(parse_vk(pp, read_file(p)));
      check_ring(pp, ring);
      write_file(out_path, serialize_ring(pp, ring));
      out << "ring of " << ring.size() << " members\n";
      return 0;
    }
    if (*sign_cmd) {
      const PublicParams pp = load_params(params_path);
      const Ring ring = parse_ring(pp, read_file(ring_path));
      const SigningKey sk = parse_sk(read_file(sk_path));
      const std::vector<std::uint8_t> mu = parse_message(msg_hex, pp.t);
      RandomTape tape = tape_path.empty() ? RandomTape(resolve_seed(seed_hex), "sign") : parse_tape(read_file(tape_path));
      const Signature sig = sign(pp, mu, ring, sk, tape);
      if (tape.is_explicit() && tape.cursor() != tape.explicit_size()) {
        throw Failure{2, "tape has " + std::to_string(tape.explicit_size() - tape.cursor()) + " unused words"};
      }
      write_file(out_path, serialize_signature(sig));
      out << "signature: N = " << sig.n_ring << ", " << sig.x.size() << " entries\n";
      return 0;
    }
    if (*verify_cmd) {
      const PublicParams pp = load_params(params_path);
      const Ring ring = parse_ring(pp, read_file(ring_path));
      const std::vector<std::uint8_t> mu = parse_message(msg_hex, pp.t);
      const Signature sig = parse_signature(read_file(sig_path));
      const VerifyCode code = verify(pp, mu, ring, sig);
      out << (code == VerifyCode::accept ? "accept" : "reject") << " (" << verify_code_name(code) << ")\n";
      return code == VerifyCode::accept ? 0 : 1;
    }
    if (*explain_cmd) {
      const PublicParams pp = load_params(params_path);
      const Ring ring = parse_ring(pp, read_file(ring_path));
      const SigningKey sk = parse_sk(read_file(sk_path));
      const std::vector<std::uint8_t> mu = parse_message(msg_hex, pp.t);
      const Signature sig = parse_signature(read_file(sig_path));
      const Seed seed = resolve_seed(seed_hex);
      RandomTape fresh(seed, "explain");
      const std::vector<std::uint64_t> words = explain_sign(pp, mu, ring, sig, sk, fresh);
      write_file(tape_path, serialize_tape(seed, words));
      out << "tape: " << words.size() << " words\n";
      return 0;
    }
    if (*inspect_cmd) return inspect(file_path, check, params_path, vk_path, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace lrs::cli
