#pragma once

#include "monrank/arrangements.hpp"
#include "monrank/error.hpp"
#include "monrank/matrix.hpp"
#include "monrank/omatroid.hpp"
#include "monrank/parallel.hpp"
#include "monrank/report.hpp"
#include "monrank/sign_vector.hpp"
#include "monrank/simplex.hpp"
#include "monrank/spectral.hpp"
#include "monrank/topes.hpp"
#include "monrank/vcdim.hpp"
