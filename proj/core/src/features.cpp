#include "qetune/features.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qetune/errors.hpp"

namespace qetune {

std::vector<double> encode_features(const PauliHamiltonian& h,
                                    std::span<const double> hyperparams,
                                    int k_slots, double ml_cutoff) {
  if (k_slots < 1) throw std::invalid_argument("k_slots must be >= 1");
  std::vector<double> x;
  x.reserve(hyperparams.size() + 1 + static_cast<std::size_t>(k_slots));
  x.insert(x.end(), hyperparams.begin(), hyperparams.end());
  x.push_back(static_cast<double>(h.n_qubits()));
  PauliHamiltonian c =
      compress(h, ml_cutoff, static_cast<std::size_t>(k_slots));
  for (const auto& t : c.terms()) x.push_back(t.coeff);
  x.resize(hyperparams.size() + 1 + static_cast<std::size_t>(k_slots), 0.0);
  return x;
}

namespace {

void write_double(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

void write_dataset_header(std::ostream& out, const Dataset& d) {
  out << "dataset " << d.solver << ' ' << d.n_hyper << ' ' << d.k_slots
      << '\n';
}

void write_record(std::ostream& out, const TrainingRecord& r) {
  out << r.system;
  for (double v : r.x) {
    out << ' ';
    write_double(out, v);
  }
  out << ' ';
  write_double(out, r.y);
  out << '\n';
}

void save_dataset(const Dataset& d, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  write_dataset_header(out, d);
  for (const auto& r : d.records) write_record(out, r);
}

Dataset load_dataset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  Dataset d;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty dataset file", 1);
  ++line_no;
  {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag >> d.solver >> d.n_hyper >> d.k_slots) ||
        tag != "dataset")
      throw ParseError("expected 'dataset <solver> <n_hyper> <k_slots>'", 1);
  }
  const std::size_t want = static_cast<std::size_t>(d.feature_length());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    TrainingRecord r;
    if (!(ss >> r.system)) continue;
    double v;
    std::vector<double> vals;
    while (ss >> v) vals.push_back(v);
    if (vals.size() != want + 1)
      throw ParseError("record has " + std::to_string(vals.size()) +
                           " values, expected " + std::to_string(want + 1),
                       line_no);
    r.y = vals.back();
    vals.pop_back();
    r.x = std::move(vals);
    if (!std::isfinite(r.y)) throw ParseError("non-finite label", line_no);
    d.records.push_back(std::move(r));
  }
  return d;
}

}  // namespace qetune
