#include "qetune/hamiltonian.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qetune/errors.hpp"

namespace qetune {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

std::string PauliString::str() const {
  if (ops_.empty()) return "I";
  std::string out;
  for (const auto& [q, p] : ops_) {
    if (!out.empty()) out += ' ';
    out += pauli_char(p);
    out += std::to_string(q);
  }
  return out;
}

PauliHamiltonian::PauliHamiltonian(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits) {
  if (n_qubits <= 0)
    throw std::invalid_argument("n_qubits must be positive");
  // Merge duplicate strings, keeping first-occurrence order.
  std::map<PauliString, std::size_t> index;
  for (auto& t : terms) {
    if (!std::isfinite(t.coeff))
      throw std::invalid_argument("non-finite coefficient");
    if (t.string.max_qubit() >= n_qubits)
      throw std::invalid_argument("qubit index " +
                                  std::to_string(t.string.max_qubit()) +
                                  " out of range for " +
                                  std::to_string(n_qubits) + " qubits");
    auto [it, inserted] = index.emplace(t.string, terms_.size());
    if (inserted) {
      terms_.push_back(std::move(t));
    } else {
      terms_[it->second].coeff += t.coeff;
    }
  }
  std::erase_if(terms_, [](const PauliTerm& t) { return t.coeff == 0.0; });
}

bool PauliHamiltonian::operator==(const PauliHamiltonian& other) const {
  if (n_qubits_ != other.n_qubits_ || terms_.size() != other.terms_.size())
    return false;
  std::map<PauliString, double> a, b;
  for (const auto& t : terms_) a[t.string] = t.coeff;
  for (const auto& t : other.terms_) b[t.string] = t.coeff;
  return a == b;
}

PauliHamiltonian compress(const PauliHamiltonian& h, double cutoff,
                          std::size_t max_terms) {
  if (cutoff < 0.0) throw std::invalid_argument("cutoff must be >= 0");
  std::vector<PauliTerm> kept;
  kept.reserve(h.size());
  for (const auto& t : h.terms())
    if (std::abs(t.coeff) > cutoff) kept.push_back(t);
  std::sort(kept.begin(), kept.end(), [](const PauliTerm& a, const PauliTerm& b) {
    double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
    if (ma != mb) return ma > mb;
    return a.string < b.string;
  });
  if (kept.size() > max_terms) kept.resize(max_terms);
  return PauliHamiltonian(h.n_qubits(), std::move(kept));
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

double parse_coeff(const std::string& tok, int line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v))
      throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad coefficient '" + tok + "'", line_no);
  }
}

std::pair<int, Pauli> parse_op(const std::string& tok, int line_no) {
  if (tok.size() < 2) throw ParseError("bad Pauli token '" + tok + "'", line_no);
  Pauli p;
  switch (tok[0]) {
    case 'X': p = Pauli::X; break;
    case 'Y': p = Pauli::Y; break;
    case 'Z': p = Pauli::Z; break;
    default:
      throw ParseError("bad Pauli letter in '" + tok + "'", line_no);
  }
  int q = 0;
  auto [ptr, ec] =
      std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || q < 0)
    throw ParseError("bad qubit index in '" + tok + "'", line_no);
  return {q, p};
}

}  // namespace

PauliHamiltonian parse_hamiltonian(std::istream& in) {
  int n_qubits = -1;
  std::vector<PauliTerm> terms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "qubits") {
      if (n_qubits >= 0) throw ParseError("duplicate qubits header", line_no);
      if (toks.size() != 2)
        throw ParseError("expected 'qubits <n>'", line_no);
      int n = 0;
      auto [ptr, ec] =
          std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), n);
      if (ec != std::errc() || ptr != toks[1].data() + toks[1].size() || n <= 0)
        throw ParseError("bad qubit count '" + toks[1] + "'", line_no);
      n_qubits = n;
      continue;
    }
    if (n_qubits < 0)
      throw ParseError("term before 'qubits <n>' header", line_no);
    double coeff = parse_coeff(toks[0], line_no);
    std::map<int, Pauli> ops;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto [q, p] = parse_op(toks[i], line_no);
      if (q >= n_qubits)
        throw ParseError("qubit index " + std::to_string(q) +
                             " out of range (n = " + std::to_string(n_qubits) +
                             ")",
                         line_no);
      if (!ops.emplace(q, p).second)
        throw ParseError("duplicate qubit " + std::to_string(q) + " in term",
                         line_no);
    }
    terms.push_back({coeff, PauliString(std::move(ops))});
  }
  if (n_qubits < 0) throw ParseError("missing 'qubits <n>' header", line_no);
  return PauliHamiltonian(n_qubits, std::move(terms));
}

void serialize_hamiltonian(const PauliHamiltonian& h, std::ostream& out) {
  out << "qubits " << h.n_qubits() << '\n';
  char buf[64];
  for (const auto& t : h.terms()) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.coeff);
    out << buf;
    for (const auto& [q, p] : t.string.ops())
      out << ' ' << pauli_char(p) << q;
    out << '\n';
  }
}

PauliHamiltonian load_hamiltonian(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return parse_hamiltonian(in);
}

void save_hamiltonian(const PauliHamiltonian& h,
                      const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  serialize_hamiltonian(h, out);
}

}  // namespace qetune
