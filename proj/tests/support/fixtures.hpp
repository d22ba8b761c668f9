#pragma once

#include <array>
#include <string>
#include <string_view>

#include "causality/brat.hpp"

namespace fixtures {

// Bracketed strings exactly as printed for the four worked examples, spacing
// irregularities included.
inline constexpr std::array<std::string_view, 4> kTable2 = {
    "(1 (13 (10 (9 (23 The) (23 Gateway)) (8 (8 (8 (8 (8 (8 (8 (8 (23 shall) (23 provide)) (23 a)) (23 minimum)) "
    "(23 of)) (23 32kW)) (23 for)) (23 Gateway)) (23 use))) (11 (6 when) (10 (9 SEP) (8 (23 is) (23 inactive)))))(3 .))",
    "(1 (20 (20 (17 (23 For) (23 example))(3 ,)) (13 (14 (11 (6 when) (4 (4 (9 E=16) (23 and)) (9 I=5)))(3 ,)) "
    "(12 (6 then) (10 (9 (9 (9 (9 (9 (9 (23 the) (23 length)) (23 occupied)) (23 by)) (23 the)) (23 check)) "
    "(23 symbols)) (8 (8 (8 (23 is) (23 always)) (23 1280)) (23 bits))))))(3 .))",
    "(1 (13 (10 (9 (9 (23 The) (23 witness)) (23 plate)) (16 (16 (23 shall) (23 not)) (8 (23 be) (23 used)))) "
    "(11 (6 when) (10 (9 it) (4 (4 (8 (23 is) (23 stored))(3 ,)) (4 (4 (8 unused)(3 ,)) (8 (8 (8 (8 (23 for) "
    "(23 more)) (23 than)) (23 two)) (23 months)))))))(3 .))",
    "(1 (20 (20 (17 (17 (17 (17 (23 For) (23 plated)) (23 through)) (23 holes)) (23 only))(2 :)) (13 (14 (11 "
    "(6 When) (10 (9 (23 the) (23 repair)) (8 (23 is) (23 completed))))(3 ,)) (10 (9 (9 (23 a) (23 clinched)) "
    "(23 lead-through)) (8 (8 (8 (8 (8 (8 (8 (8 (23 is) (23 to)) (23 be)) (23 inserted)) (23 in)) (23 the)) "
    "(23 plated)) (23 through)) (23 hole)))))(3 .))",
};

inline constexpr std::array<std::string_view, 4> kTable2Names = {"s1", "s2", "s3", "s4"};

// "If A is true and B is false, then C shall occur." transcribed from the
// left- and right-branching figures.
inline constexpr std::string_view kReq1Left =
    "(1 (13 (14 (11 (6 If) (4 (4 (10 (9 A) (8 (23 is) (23 true))) (23 and)) (10 (9 B) (8 (23 is) (23 false))))) "
    "(3 ,)) (12 (6 then) (10 (9 C) (8 (23 shall) (23 occur))))) (3 .))";
inline constexpr std::string_view kReq1Right =
    "(1 (13 (14 (11 (6 If) (4 (10 (9 A) (8 (23 is) (23 true))) (4 (23 and) (10 (9 B) (8 (23 is) (23 false)))))) "
    "(3 ,)) (12 (6 then) (10 (9 C) (8 (23 shall) (23 occur))))) (3 .))";

inline std::string data_path(std::string_view rel) { return std::string(CAUSALITY_TEST_DATA) + "/" + std::string(rel); }

inline causality::StandoffDoc load_doc(std::string_view name) {
  const std::string base = data_path("table2/") + std::string(name);
  return causality::load_standoff_pair(base + ".txt", base + ".ann").doc;
}

}  // namespace fixtures
