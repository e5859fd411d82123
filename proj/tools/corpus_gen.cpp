// Regenerates the example corpus under corpus/ (spaces, maps, operators,
// an action and a tabulated embedding). Deterministic; run from the repo
// root as: corpus_gen <output-dir>

#include <iostream>

#include "coarselab/cobounded.hpp"
#include "coarselab/gallery.hpp"
#include "coarselab/io.hpp"

using namespace coarselab;
namespace gal = coarselab::gallery;

namespace {

void put(const std::string& dir, const std::string& name, const std::string& text) {
  io::write_file(dir + "/" + name, text);
  std::cout << "wrote " << name << "\n";
}

}  // namespace

int main(int argc, char** argv) try {
  if (argc != 2) {
    std::cerr << "usage: corpus_gen <output-dir>\n";
    return 2;
  }
  const std::string dir = argv[1];

  // the bijective folding Z -> N on {1..40}
  const auto folding = gal::folding_map(40);
  put(dir, "zwin40.json", io::space_to_json(*folding.domain.space));
  put(dir, "nat40.json", io::space_to_json(*folding.codomain.space));
  put(dir, "folding40.json", io::map_to_json(folding.map, /*inline_spaces=*/true));

  // the standard projection of a Z^2 window onto Z
  const auto proj = gal::projection_2d_to_1d(8);
  put(dir, "grid2d8.json", io::space_to_json(*proj.domain));
  put(dir, "line8.json", io::space_to_json(*proj.codomain));
  put(dir, "proj8.json", io::map_to_json(proj.map, /*inline_spaces=*/true));

  // the reflection action on Z[-5,5]
  const auto window = gal::int_window(-5, 5);
  put(dir, "zwin11.json", io::space_to_json(*window.space));
  {
    const auto perms = gal::reflection_action(window);
    std::string text = "{\n  \"space\": \"" + window.space->label() + "\",\n  \"perms\": [";
    for (std::size_t p = 0; p < perms.size(); ++p) {
      text += p ? ", [" : "[";
      for (std::size_t i = 0; i < perms[p].size(); ++i) {
        text += (i ? "," : "") + std::to_string(perms[p][i]);
      }
      text += "]";
    }
    text += "]\n}\n";
    put(dir, "reflect11.json", text);
  }

  // the double cover of a path by a cycle
  const auto cover = gal::cycle_double_cover(8);
  put(dir, "cycle16.json", io::space_to_json(*cover.cycle));
  put(dir, "path9.json", io::space_to_json(*cover.path));
  put(dir, "cover16.json", io::map_to_json(cover.map, /*inline_spaces=*/true));

  // the inclusion N -> Z: coarse but not co-coarse (the negative side is
  // unreachable); its certificate fails with a counterexample near 0
  {
    const auto nat10 = gal::nat_window(10);
    const auto zwin = gal::int_window(-10, 10);
    std::vector<PointId> values(nat10.space->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = zwin.id_of(nat10.value_of(static_cast<PointId>(i)));
    }
    put(dir, "incl10.json",
        io::map_to_json(PointMap(nat10.space, zwin.space, values), /*inline_spaces=*/true));
  }

  // operators over the N-window: the one-entry instance and a fixed band
  const SpacePtr nat = folding.codomain.space;
  put(dir, "op_e21.json",
      io::operator_to_json(BandOperator::matrix_unit(nat, folding.codomain.id_of(2),
                                                     folding.codomain.id_of(1)),
                           /*inline_space=*/true));
  {
    std::vector<OperatorEntry> entries;
    std::uint64_t state = 0xabcdef1234567890ull;
    for (std::size_t x = 0; x < nat->size(); ++x) {
      for (std::size_t y = 0; y < nat->size(); ++y) {
        if (nat->dist(static_cast<PointId>(x), static_cast<PointId>(y)) > 3) continue;
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        if ((state >> 60) < 9) {  // keep ~56%
          const double re = static_cast<double>(static_cast<int>((state >> 32) % 17) - 8) / 4.0;
          const double im = static_cast<double>(static_cast<int>((state >> 16) % 17) - 8) / 4.0;
          entries.push_back(OperatorEntry{static_cast<PointId>(x), static_cast<PointId>(y),
                                          Scalar{re, im}});
        }
      }
    }
    put(dir, "band40.json",
        io::operator_to_json(BandOperator(nat, std::move(entries)), /*inline_space=*/true));
  }

  // a 1-to-2 spatially implemented embedding and a wrong isometry for it
  {
    const SpacePtr x = share(build_grid_window(1, 6));
    const SpacePtr y = share(build_grid_window(1, 30));
    auto columns_for = [&](Dist offset) {
      std::vector<IsometryMap::Column> columns(x->size() * 2);
      for (std::size_t p = 0; p < x->size(); ++p) {
        for (int i = 0; i < 2; ++i) {
          columns[product_point(static_cast<PointId>(p), i, 2)] = {
              {static_cast<PointId>(offset + 4 * static_cast<Dist>(p) + i), Scalar{1.0, 0.0}}};
        }
      }
      return columns;
    };
    const IsometryMap w(IsometryMap::Kind::amplified, x, y, 2, columns_for(2));
    put(dir, "phi2.json",
        io::embedding_to_json(EmbeddingTable::tabulate_spatial(w), /*inline_spaces=*/true));
    const IsometryMap wrong(IsometryMap::Kind::amplified, x, y, 2, columns_for(3));
    put(dir, "u_wrong.json", io::isometry_to_json(wrong, /*inline_spaces=*/false));
  }

  return 0;
} catch (const std::exception& e) {
  std::cerr << "corpus_gen: " << e.what() << "\n";
  return 2;
}
