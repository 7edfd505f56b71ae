SETTINGS_TEMPLATE = """
# Copy this file to dgbv_lab.yml next to your model files.
# Command-line flags override every value here.
order: 4              # truncation order N of the Maurer-Cartan series (1..8)
mode: analytic        # analytic | normalized
output_format: text   # text | machine
log_level: WARNING
# lefschetz_omega: "e1^e3, e2^e4"   # class used by the lefschetz command
"""


MODEL_TEMPLATE = """
# Heisenberg nilmanifold, built from Lie structure constants.
# [X_i, X_j] = sum_k f^k_ij X_k is written as [i, j, k, f^k_ij].
name: heisenberg-example
kind: lie
description: Chevalley-Eilenberg model with the Koszul operator of w = X1^X3
lie:
  dimension: 3
  constants:
    - [0, 1, 2, "1"]
bivector:
  - [0, 2, "1"]
"""


GRAMMAR_HELP = """# Model document grammar (YAML)
#
# name: <string>                        required
# kind: dgbv | bigraded | lie           default dgbv
# description: <string>
# basis:                                 dgbv and bigraded kinds
#   - {name: <string>, degree: <int>}
#   - {name: <string>, bidegree: [<p>, <q>]}
# unit: <ref>                            default 0
# products:                              e_i ^ e_j has coefficient s on e_k
#   - [<ref i>, <ref j>, <ref k>, <scalar s>]
# operators:                             delta, bvop (dgbv) or partial, dbar (bigraded)
#   <name>:
#     shift: <int> | [<p>, <q>]
#     entries:                           f(e_column) has coefficient s on e_row
#       - [<ref row>, <ref column>, <scalar s>]
# integral:    [[<ref>, <scalar>], ...]
# inner_product: [[<ref i>, <ref j>, <scalar>], ...]   upper triangle, Hermitian mirror implied
# omega:       [[<ref>, <scalar>], ...]
# real_structure: [[<ref row>, <ref column>, <scalar>], ...]   bigraded kind
# lie: {dimension: <int>, constants: [[i, j, k, <scalar>], ...], generators: [<names>]}
# bivector: [[i, j, <scalar>], ...]      lie kind, w = sum w^ij X_i ^ X_j
#
# <ref>    basis position (integer) or basis name
# <scalar> exact literal: 3, -1/2, i, 2-3/4i, 1/2+i
# Products with the unit are implied and must not be listed.
"""
