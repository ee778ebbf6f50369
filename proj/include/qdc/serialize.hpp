#pragma once

#include <filesystem>
#include <string>

#include "qdc/circuit.hpp"

namespace qdc {

/// Unitary file: {"dims": [d1, d2], "matrix": [[[re, im], ...], ...]}, row-major.
struct UnitaryFile {
    QuditSystem system;
    ComplexMatrix matrix;
};

std::string unitary_to_json(const UnitaryFile& u);
UnitaryFile unitary_from_json(const std::string& text);

/// Circuit file: {"dims": [d1, d2], "gates": [{"kind": ..., ...}, ...]} with
/// an optional "provenance": {"source": ..., "stage": ...}.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qdc
