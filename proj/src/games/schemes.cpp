#include "qfelab/games/schemes.hpp"

#include <cmath>
#include <cstdio>
#include <string_view>

#include "qfelab/hash.hpp"
#include "qfelab/prs.hpp"

namespace qfelab::games {

namespace {

std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

std::uint64_t odd_inverse(std::uint64_t c) {
  std::uint64_t x = c;  // correct to 3 bits; each Newton step doubles that
  for (int i = 0; i < 6; ++i) x *= 2 - c * x;
  return x;
}

struct Permutation {
  std::uint64_t xor_mask;
  std::uint64_t multiplier;
  std::uint64_t mask;

  std::uint64_t forward(std::uint64_t x) const { return ((x ^ xor_mask) * multiplier) & mask; }
  std::uint64_t inverse(std::uint64_t y) const {
    return ((y * odd_inverse(multiplier)) & mask) ^ xor_mask;
  }
};

Permutation permutation_for(std::uint64_t seed, int width) {
  const std::uint64_t mask = width_mask(width);
  return {combine64(seed, static_cast<std::uint64_t>(width)) & mask,
          (combine64(seed, 0x5bd1e995ULL + static_cast<std::uint64_t>(width)) | 1U) & mask, mask};
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const BasisRegister& require_basis(const Register& reg, const char* what) {
  const auto* basis = std::get_if<BasisRegister>(&reg);
  if (basis == nullptr) throw std::invalid_argument(std::string(what) + " needs a classical register");
  return *basis;
}

}  // namespace

int register_qubits(const Register& reg) {
  if (const auto* b = std::get_if<BasisRegister>(&reg)) return b->width;
  return std::get<DensityOperator>(reg).qubits();
}

DensityOperator as_density(const Register& reg) {
  if (const auto* b = std::get_if<BasisRegister>(&reg)) return PureState::basis(b->width, b->label).density();
  return std::get<DensityOperator>(reg);
}

std::string describe(const Register& reg) {
  if (const auto* b = std::get_if<BasisRegister>(&reg)) {
    return "basis:" + std::to_string(b->width) + ":" + hex64(b->label);
  }
  const Matrix& m = std::get<DensityOperator>(reg).matrix();
  const std::string_view bytes(reinterpret_cast<const char*>(m.data()),
                               static_cast<std::size_t>(m.size()) * sizeof(Complex));
  return "dm:" + std::to_string(m.rows()) + ":" + hex64(fnv1a64(bytes));
}

std::string CircuitId::to_string() const {
  switch (kind) {
    case Kind::identity:
      return "identity";
    case Kind::pke_enc:
      return "pke-enc:" + hex64(public_key);
    case Kind::prs_gen:
      return "prs-gen:" + std::to_string(prs_lambda) + ":" + std::to_string(prs_n);
  }
  return "unknown";
}

// ---------------------------------------------------------------- ToyPke

ToyPke::ToyPke(int message_bits) : message_bits_(message_bits) {
  if (message_bits < 1 || message_bits > 32) throw std::invalid_argument("ToyPke: message bits outside [1, 32]");
}

std::uint64_t ToyPke::message_mask() const { return width_mask(message_bits_); }

std::uint64_t ToyPke::public_key_of(std::uint64_t secret_key) { return mix64(secret_key ^ 0xA5A5A5A5A5A5A5A5ULL); }

PkeKeyPair ToyPke::gen(SeededSampler& sampler) const {
  const std::uint64_t sk = sampler.bits();
  return {sk, public_key_of(sk)};
}

BasisRegister ToyPke::enc(std::uint64_t pk, std::uint64_t message, SeededSampler& sampler) const {
  return enc_with_nonce(pk, message, sampler.bits());
}

BasisRegister ToyPke::enc_with_nonce(std::uint64_t pk, std::uint64_t message,
                                     std::uint64_t nonce) const {
  if (message > message_mask()) throw std::out_of_range("ToyPke: message wider than the scheme");
  nonce &= width_mask(kNonceBits);
  const std::uint64_t body = (message ^ combine64(pk, nonce)) & message_mask();
  return {(nonce << message_bits_) | body, ciphertext_bits()};
}

std::uint64_t ToyPke::decrypt_with_public_key(std::uint64_t pk, const BasisRegister& ct) const {
  if (ct.width != ciphertext_bits()) throw DimensionMismatch("ToyPke: ciphertext width mismatch");
  const std::uint64_t nonce = ct.label >> message_bits_;
  return ((ct.label & message_mask()) ^ combine64(pk, nonce)) & message_mask();
}

std::uint64_t ToyPke::dec(std::uint64_t sk, const BasisRegister& ct) const {
  return decrypt_with_public_key(public_key_of(sk), ct);
}

Register evaluate_circuit(const CircuitId& circuit, const Register& input) {
  switch (circuit.kind) {
    case CircuitId::Kind::identity:
      return input;
    case CircuitId::Kind::pke_enc: {
      const BasisRegister& m = require_basis(input, "pke-enc circuit");
      const ToyPke pke(m.width);
      const std::uint64_t nonce = combine64(circuit.public_key, m.label ^ kGoldenGamma);
      return pke.enc_with_nonce(circuit.public_key, m.label, nonce);
    }
    case CircuitId::Kind::prs_gen: {
      const BasisRegister& key = require_basis(input, "prs-gen circuit");
      const PrsFamily family(circuit.prs_lambda, circuit.prs_n);
      return family.generate(key.label).density();
    }
  }
  throw std::invalid_argument("evaluate_circuit: unknown circuit");
}

// ---------------------------------------------------------------- ToyQfe

ToyQfe::ToyQfe(int lambda, int ciphertext_bound) : lambda_(lambda), ciphertext_bound_(ciphertext_bound) {
  if (lambda < 1 || ciphertext_bound < 1) throw std::invalid_argument("ToyQfe: parameters must be positive");
}

MasterKey ToyQfe::setup(SeededSampler& sampler) const { return {sampler.bits()}; }

FunctionalKey ToyQfe::keygen(const MasterKey& mk, const CircuitId& circuit) const {
  return {mk.seed, circuit};
}

Matrix ToyQfe::encryption_unitary(std::uint64_t seed, int width) {
  const auto d = static_cast<Eigen::Index>(dimension_of(width));
  const Permutation perm = permutation_for(seed, width);
  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) {
    const double theta = 2.0 * 3.14159265358979323846 *
                         static_cast<double>(combine64(seed ^ 0x7F4A7C15ULL, static_cast<std::uint64_t>(x)) >> 11) *
                         0x1.0p-53;
    u(static_cast<Eigen::Index>(perm.forward(static_cast<std::uint64_t>(x))), x) = std::polar(1.0, theta);
  }
  return u;
}

QfeCiphertext ToyQfe::enc(const MasterKey& mk, const Register& message) const {
  const int width = register_qubits(message);
  if (width > ciphertext_bound_) {
    throw ProtocolViolation("ToyQfe: " + std::to_string(width) + "-qubit ciphertext exceeds bound " +
                            std::to_string(ciphertext_bound_));
  }
  if (const auto* b = std::get_if<BasisRegister>(&message)) {
    return {BasisRegister{permutation_for(mk.seed, width).forward(b->label), width}};
  }
  const Matrix u = encryption_unitary(mk.seed, width);
  const Matrix& rho = std::get<DensityOperator>(message).matrix();
  return {DensityOperator::trusted(u * rho * u.adjoint())};
}

Register ToyQfe::dec(const FunctionalKey& fk, const QfeCiphertext& ct) const {
  const int width = register_qubits(ct.body);
  Register plain;
  if (const auto* b = std::get_if<BasisRegister>(&ct.body)) {
    plain = BasisRegister{permutation_for(fk.seed, width).inverse(b->label), width};
  } else {
    const Matrix u = encryption_unitary(fk.seed, width);
    const Matrix& rho = std::get<DensityOperator>(ct.body).matrix();
    plain = DensityOperator::trusted(u.adjoint() * rho * u);
  }
  return evaluate_circuit(fk.circuit, plain);
}

// ---------------------------------------------------------------- SuccinctQfeStub

SuccinctQfeStub::SuccinctQfeStub(int message_qubits, int ciphertext_qubits, std::uint64_t seed)
    : s_(message_qubits), t_(ciphertext_qubits) {
  if (ciphertext_qubits < 1 || ciphertext_qubits > message_qubits || message_qubits > kMaxQubits) {
    throw std::invalid_argument("SuccinctQfeStub: need 1 <= t <= s <= 12");
  }
  SeededSampler sampler(seed, 0);
  scramble_ = sample_haar_unitary(t_, sampler);
}

KrausChannel SuccinctQfeStub::enc_channel() const {
  const auto k = static_cast<Eigen::Index>(dimension_of(t_));
  const Eigen::Index e = Eigen::Index{1} << (s_ - t_);
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < e; ++j) {
    Matrix drop = Matrix::Zero(k, k * e);
    for (Eigen::Index a = 0; a < k; ++a) drop(a, a * e + j) = 1.0;
    ops.push_back(scramble_ * drop);
  }
  return KrausChannel(std::move(ops), s_, t_);
}

KrausChannel SuccinctQfeStub::dec_channel(const CircuitId& circuit) const {
  if (circuit.kind != CircuitId::Kind::identity) {
    throw std::invalid_argument("SuccinctQfeStub: only the identity circuit is supported");
  }
  const auto k = static_cast<Eigen::Index>(dimension_of(t_));
  const Eigen::Index e = Eigen::Index{1} << (s_ - t_);
  Matrix pad = Matrix::Zero(k * e, k);
  for (Eigen::Index a = 0; a < k; ++a) pad(a * e, a) = 1.0;
  return KrausChannel({pad * scramble_.adjoint()}, t_, s_);
}

}  // namespace qfelab::games
