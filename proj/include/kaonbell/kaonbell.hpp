#pragma once

#include "kaonbell/errors.hpp"
#include "kaonbell/params.hpp"
#include "kaonbell/linalg.hpp"
#include "kaonbell/numeric.hpp"
#include "kaonbell/quasispin.hpp"
#include "kaonbell/single_kaon.hpp"
#include "kaonbell/bipartite.hpp"
#include "kaonbell/entanglement.hpp"
#include "kaonbell/bell_chsh.hpp"
#include "kaonbell/optimizer.hpp"
#include "kaonbell/diagrams.hpp"
#include "kaonbell/format.hpp"
