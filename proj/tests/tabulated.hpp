#pragma once

#include "d4/anyons.hpp"

// 8 S as tabulated, rows and columns in the order of all_anyons()
inline const int kTabulated8S[22][22] = {
    { 1,  1,  1,  1,  1,  1,  1,  1,  2,  2,  2,  2,  2,  2,  2,  2,  2,  2,  2,  2,  2,  2},
    { 1,  1,  1,  1,  1,  1,  1,  1, -2, -2,  2,  2,  2,  2, -2, -2,  2,  2, -2, -2, -2, -2},
    { 1,  1,  1,  1,  1,  1,  1,  1,  2,  2, -2, -2,  2,  2, -2, -2, -2, -2,  2,  2, -2, -2},
    { 1,  1,  1,  1,  1,  1,  1,  1,  2,  2,  2,  2, -2, -2,  2,  2, -2, -2, -2, -2, -2, -2},
    { 1,  1,  1,  1,  1,  1,  1,  1, -2, -2, -2, -2,  2,  2,  2,  2, -2, -2, -2, -2,  2,  2},
    { 1,  1,  1,  1,  1,  1,  1,  1,  2,  2, -2, -2, -2, -2, -2, -2,  2,  2, -2, -2,  2,  2},
    { 1,  1,  1,  1,  1,  1,  1,  1, -2, -2,  2,  2, -2, -2, -2, -2, -2, -2,  2,  2,  2,  2},
    { 1,  1,  1,  1,  1,  1,  1,  1, -2, -2, -2, -2, -2, -2,  2,  2,  2,  2,  2,  2, -2, -2},
    { 2, -2,  2,  2, -2,  2, -2, -2,  4, -4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},
    { 2, -2,  2,  2, -2,  2, -2, -2, -4,  4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},
    { 2,  2, -2,  2, -2, -2,  2, -2,  0,  0,  4, -4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},
    { 2,  2, -2,  2, -2, -2,  2, -2,  0,  0, -4,  4,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},
    { 2,  2,  2, -2,  2, -2, -2, -2,  0,  0,  0,  0,  4, -4,  0,  0,  0,  0,  0,  0,  0,  0},
    { 2,  2,  2, -2,  2, -2, -2, -2,  0,  0,  0,  0, -4,  4,  0,  0,  0,  0,  0,  0,  0,  0},
    { 2, -2, -2,  2,  2, -2, -2,  2,  0,  0,  0,  0,  0,  0,  4, -4,  0,  0,  0,  0,  0,  0},
    { 2, -2, -2,  2,  2, -2, -2,  2,  0,  0,  0,  0,  0,  0, -4,  4,  0,  0,  0,  0,  0,  0},
    { 2,  2, -2, -2, -2,  2, -2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  4, -4,  0,  0,  0,  0},
    { 2,  2, -2, -2, -2,  2, -2,  2,  0,  0,  0,  0,  0,  0,  0,  0, -4,  4,  0,  0,  0,  0},
    { 2, -2,  2, -2, -2, -2,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  4, -4,  0,  0},
    { 2, -2,  2, -2, -2, -2,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -4,  4,  0,  0},
    { 2, -2, -2, -2,  2,  2,  2, -2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -4,  4},
    { 2, -2, -2, -2,  2,  2,  2, -2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  4, -4},
};

inline const d4::anyons::Gauss kTabulatedT[22] = {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0},  {1, 0}, {1, 0},
                               {1, 0}, {-1, 0}, {1, 0}, {-1, 0}, {1, 0}, {-1, 0}, {1, 0}, {-1, 0},
                               {1, 0}, {-1, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
