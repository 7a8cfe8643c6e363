#include "pipeframe/features.hpp"

namespace pipeframe {

// 256 comparison pairs drawn once from an LCG (state 0x1D872B41,
// x <- 1103515245*x + 12345 mod 2^31, coordinates (x mod 27) - 13, pairs
// rejected outside the radius-13 disc or when p == q) and frozen here.
// Regenerating is never needed; the table itself is the contract.
const std::array<BriefTestPair, 256> kBriefPattern = {{
    { -7,  8,  3,-12}, {  4,  7,  8,  6}, {  9, -4, 10, -5}, {  2,-10,  6, -8},
    { -3,-10, 11, -4}, {  2,  0, -2, -3}, { -9, -9, 12,  5}, {  2,  2,  8,-10},
    { -8, 10,  0,-12}, { 10, -3, -4,  3}, {  7, -3,  2,  3}, {  2,  3, 11,  6},
    { 10,  0,  9,  8}, {-13,  0, -2, -5}, {  9, -9,-10, -8}, { -8, -8, 10,  8},
    { -7,-10, -7, -8}, { 10, -8, 11,  4}, {  1,-10, -4,  3}, {  9, -2, -3,-12},
    { -3, -6, 11,  6}, {  2,-11,  9,  5}, {  2,  2,  6, 11}, {  5, -5,  3,  7},
    { -9, -1,-10, -6}, {-10,  2, -2,-10}, { -5,  6, 11, -6}, {  6,  5,  4, 10},
    {  1, -2,-10,  7}, { -2,  7, 13,  0}, { -2,  2, -1, -6}, { 11,  2,-10,  3},
    {  5, -1,  0,-11}, { -6, 10,  2,  8}, { -9, -7,  8,  1}, {  5, -7, 10, -3},
    { 10,  5, -6, 11}, {  4, -6,  5, 11}, {  3,  1, -4, -2}, {  8, -7, -3,  5},
    { -4,  5, -6,  0}, {  0, -2,  3,  6}, { 12,  1, 10, -4}, {  0,  8,-10, -3},
    {  6,-11,-11, -1}, { -4,-12,  4,  8}, {  3,  7, -1, -2}, {  3, -4, -4,  2},
    { -6,  9,  0, -5}, {  6, -9,  1,  4}, {-11,  6, -6,  7}, {  8,  1,  7,  2},
    {  1,  9,  5, 10}, { -6, -8, -3, -4}, {-11,  4,  7,  5}, { -9, -7, -2, 10},
    {  3,-12,-12,  3}, {  5, 12, 12,  0}, { -6,-10,  9,  9}, {  7, -3,  3,  1},
    {  0,  9,  3, -2}, { -5,  3,-12, -2}, {  1, 12,  9,  1}, { -1, 12,  4,  6},
    { -1, -9, -7,  4}, { 10,  3, -3,  2}, {  3,  6,  2, -5}, { -1, -7,  0,  9},
    {-10,  7,  3,  0}, {  2, -9, -2, -9}, { 11, -2,  7,  6}, { -8, -2,  8,  1},
    { 11,  4,-10, -3}, { -2, -5,  2,  3}, {  0,  4,  8, -2}, {  1,  7,-11,  6},
    { -6,  5,  0, -9}, {  0, -4,  2, -5}, {-12, -3, -7,  9}, { 10, -3,  9, -2},
    { -6,  3,  0,  8}, { 10,  3,  4,  8}, { -1,  7,  3,  3}, { -9,  0, 12, -2},
    {  2, -3,  3,-12}, { -4, -9,  7, -9}, {-12,  2,  3,  4}, {  6, -3,  2, -3},
    {  9, -7, 12, -2}, { 12, -2,  7,  6}, {-11,  2, -3,  8}, {  5,  7,-12,  2},
    {  5, 10, -7,  9}, {  2,  1,  6,  7}, { 12, -2, 10,  1}, { -4, -2,  7, -5},
    {  3,-11,  7, 10}, {  1, -9,  2, 12}, { -6,  0, -1,-10}, {  8, 10, -9,  1},
    { 10, -3, -9, -4}, { -1,  2,-13,  0}, {  3, -7, -4,-10}, {  0,  1, -4,  0},
    {  9,  7,  7, -5}, { -4,  5,  9,  2}, { -1,  7, -8,-10}, { 12,  3,  7, -6},
    { -4,-11, -2, -8}, { -5, -4, -4, -7}, {  0, -9, -3,-10}, {  9, -2, -2,  4},
    { -4, -6,  9,  1}, { -4, -8, -2,  0}, { -3, -8,  2, 10}, {  8, 10, -6,-11},
    { -7,  9,  3,  1}, { -3, 11,  2,  8}, { -4, -4,  7,  1}, { 12, -3,  2, -6},
    {  7, -8,-10,  6}, {-12,  2,  0, 11}, {  5, 10,  4,-11}, {  6, -9, 11,  5},
    { -2,-10, -8, 10}, {  7, 10, -6, -9}, {  6, -4, -6, -1}, {  8,  0,  0, 12},
    {  0,  9,  0, -9}, {-11,  5,  0, -2}, {  5,  6,  1,  2}, {  1, -5, -7,  3},
    { 11,  0,  1, -9}, { -3, 12, -2, -4}, {  1,  7, -1, 11}, {  8,  7, -1,  4},
    { -1, -3,  7, 10}, { -6, -4,  8,  1}, { -3,  4, 10,  3}, { -7, -6,  5, -6},
    {  5, -4, -7,  3}, {  0,  1,  6,  8}, {  5, -9,-11, -4}, { -8,  8, -9, -3},
    { -4, -8, 10,  0}, { -7, -3, 10, -3}, { -7, -6,  4,  9}, {  3, -1,  4,  9},
    {  0,-11, 11,  0}, {  7, -6,  6,  5}, {  5, -6,  3, -8}, {  9, -3, -1, -2},
    {  6,  7, -5,  5}, { -5,  8, -5, 10}, { -7, 10,  3, -6}, { -9,  7, -4, 12},
    { 10,  2, 10, -7}, { -7, -7, 11,  6}, { -1,  8, -7, -7}, { -6,  0,  4,  9},
    { -6,-10,  8, 10}, {  0,-10,-12,  3}, {-12, -4,  8,  5}, {  1,-11,  4, -6},
    {  7,-10,-12, -5}, {-10,  7,  7, -5}, { -7,  1, -6,-10}, { -5,  4, -5, 11},
    {  6,  3, -2,  1}, {  3, -6,  1, 12}, {  5,  4,  0, -8}, {  3,  3,  8, -5},
    { -7,  7, -4, -1}, { -6, -4,  6, -7}, { -7, -4, 10,  1}, {  9,  9,  0, 12},
    { -7, -1, -5,-10}, { -3, -1, 10,  8}, {  1, -3,  6,  7}, { -1,  0,  2, -5},
    {  0, -5,  9,  7}, {  6,  4, -8, -7}, {  0, 10,-12,  5}, {  4,  2,-12, -3},
    {  6, -1,  8, -4}, { -4,-12,-12,  4}, { -4, 10, -2,  5}, {  6, 11,  1, 12},
    {  9, -1,  4, 12}, {  9,  0,  8, -3}, {  4, -3, 11,  3}, { -6,  8, -1,  9},
    {  8,  2, -6, 11}, {  2,  1, -2,  3}, {  7, -9,-10, -6}, { 11,  3, -2,-11},
    {  9,  5,  1,  0}, { -4,-11, -7,  7}, {  2,  5, -8,  1}, {  3,  8, 10, -6},
    {  5,  8, -8, -2}, {  3, -1,  3,  0}, {  5,  9,  6, -4}, { -3,  4, 12,  5},
    { 12,  3, -9, -9}, {  6,  2,  7, -4}, { -8, -8,-10, -3}, {  8,  5, -4, -8},
    { -5, 10,  5,  0}, {  0, 11,  7,  0}, { -1, -9, -1, -1}, {  9,  7,-11, -6},
    { -5, -2,  0, -6}, { -5, -9,  1,  0}, {  0, -9,  9,  9}, { 10, -4,  2,  8},
    { -7,  2, -9,  7}, { -8, -3, -6,  5}, {  3,  1,-12,  5}, {-10,  0,  3, -5},
    { -4, -8, -2, 11}, { -6, -3, -2,  2}, {-10,  7,  9, -5}, { -5, -8, -9,  0},
    { -1, 10,  5, -9}, { -2, 11,  6, -8}, { -5, -6,-10, -3}, {  8, -2,-11,  3},
    {  6, -9,  0, -8}, {  2, -6,  8, -7}, {  6, -4,  3, -4}, { 12, -3,  1, -9},
    { -1, -8,  0,  7}, { -5,  1,-10, -4}, { 12, -4,  8, -3}, { -2, -7,  5,  0},
    { -8, -6, 11, -2}, {-10, -4, -3, -7}, { -6, 11, -1, -3}, { -4, -8, -5, -3},
    {  9,  3,  2, -5}, {  0,-11, -1, 10}, {  5,  3, -1,  5}, {  0,-12,  6, -3},
    {  9,  3, -5, -8}, { 10,  6, -3,-11}, { -6, 11,  3,  0}, { -4, -7, -2,  4},
    { -5, -1, -6, 11}, { -1,  0,  1, 11}, {  0, 13,-10, -7}, {  9,  0,  0,-10},
    { -3, -1,  8,  0}, {  5, -2,  2,  3}, { -5,  6,  6,  5}, {  4,-11,  4,  0},
}};

} // namespace pipeframe
