#pragma once

#include <iosfwd>
#include <string>

namespace eit {

struct Spectrum;
struct FitResult;
struct FitProblem;

/// Fixed 12-significant-digit rendering used in every text output.
std::string format_number(double v);

/// CSV: `# key = value` header lines echoing the metadata, then the column
/// header `delta1_MHz,rho22_au,rho33_au` and one row per grid point.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
std::string spectrum_csv(const Spectrum& s);

/// JSON mirror of the CSV: {"metadata": {...}, "columns": [...], "delta1_MHz": [...], ...}.
std::string spectrum_json(const Spectrum& s);

/// Fit report: parameters with units and sensitivities, residual, convergence trace.
std::string fit_report_json(const FitProblem& fp, const FitResult& r);

/// Writes `text` to `path`, throwing eit::Error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace eit
