#pragma once

#include "geoprover/problem.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

// Random well-formed problem text with `n` points (n >= 3) and a random goal.
inline std::string random_problem(std::mt19937_64& rng, std::size_t n) {
  auto pick = [&](std::size_t upto) { return std::uniform_int_distribution<std::size_t>(0, upto - 1)(rng); };
  auto name = [](std::size_t i) { return "p" + std::to_string(i); };
  // `k` distinct earlier points.
  auto distinct = [&](std::size_t upto, std::size_t k) {
    std::vector<std::size_t> all(upto);
    for (std::size_t i = 0; i < upto; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(k);
    return all;
  };
  auto object = [&](std::size_t upto) {
    switch (pick(4)) {
      case 0: {
        auto v = distinct(upto, 2);
        return "line " + name(v[0]) + " " + name(v[1]);
      }
      case 1: {
        auto v = distinct(upto, 3);
        return "pline " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]);
      }
      case 2: {
        auto v = distinct(upto, 3);
        return "tline " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]);
      }
      default: {
        auto v = distinct(upto, 2);
        return "circle " + name(v[0]) + " " + name(v[1]);
      }
    }
  };
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    text += name(i) + " = ";
    if (i < 3) {
      text += "free\n";
      continue;
    }
    auto v = distinct(i, 3);
    switch (pick(11)) {
      case 0: text += "free"; break;
      case 1: text += "on_line " + name(v[0]) + " " + name(v[1]); break;
      case 2: text += "on_circle " + name(v[0]) + " " + name(v[1]); break;
      case 3: text += "midpoint " + name(v[0]) + " " + name(v[1]); break;
      case 4: text += "foot " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]); break;
      case 5: text += "circumcenter " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]); break;
      case 6: text += "reflect " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]); break;
      case 7: text += "on_pline " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]); break;
      case 8: text += "on_tline " + name(v[0]) + " " + name(v[1]) + " " + name(v[2]); break;
      default: text += "intersect " + object(i) + " " + object(i); break;
    }
    text += "\n";
  }
  auto g = distinct(n, 4);
  switch (pick(4)) {
    case 0: text += "? coll " + name(g[0]) + " " + name(g[1]) + " " + name(g[2]) + "\n"; break;
    case 1: text += "? perp " + name(g[0]) + " " + name(g[1]) + " " + name(g[2]) + " " + name(g[3]) + "\n"; break;
    case 2: text += "? cong " + name(g[0]) + " " + name(g[1]) + " " + name(g[2]) + " " + name(g[3]) + "\n"; break;
    default:
      text += "? eq sqlen 1 " + name(g[0]) + " " + name(g[1]) + " -1/2 " + name(g[2]) + " " + name(g[3]) + " = 0\n";
      break;
  }
  return text;
}

}  // namespace gen
