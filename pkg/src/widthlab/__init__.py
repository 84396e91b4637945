"""Exact height, width, and weak width of finitely generated subgroups of
free groups and of their generator-permuting cyclic extensions."""

from .words import (Alphabet, AlphabetError, GeneratorPermutation, Word,
                    apply_twist, cyclic_reduce, free_reduce, invert, letter_token,
                    multiply, reduce_word, token_letter)
from .core_graph import (CoreGraph, PullbackComponent, build_core, contains,
                         locate_coset, pullback2, pullback_n)
from .dc import DoubleCosetAutomaton, dc_automaton
from .invariants import (CliqueMember, CosetWitness, HeightCertificate, HeightPart,
                         InvariantReport, WeakWidthPart, WidthCertificate, WidthPart,
                         distinctness, height_free, invariants_free, max_clique,
                         member_edge, weak_width_free, width_free)
from .extension import (ExtElement, ExtensionSpec, MemberNode, NodeGraph,
                        ext_conjugate, ext_distinctness, ext_inv, ext_mul,
                        free_spec, invariants_ext, node_graph, twisted_cores)
from .bounds import (HyperbolicContext, OracleBucket, OracleReport,
                     VerificationReport, ball, ball_count, corpus, oracle,
                     oracle_comparison, qc_constant, random_reduced_word,
                     random_subgroup, verify_bounds)
from .cli import Problem, ProblemError, parse_problem, verify_certificates

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "AlphabetError", "GeneratorPermutation", "Word",
    "apply_twist", "cyclic_reduce", "free_reduce", "invert", "letter_token",
    "multiply", "reduce_word", "token_letter",
    "CoreGraph", "PullbackComponent", "build_core", "contains",
    "locate_coset", "pullback2", "pullback_n",
    "DoubleCosetAutomaton", "dc_automaton",
    "CliqueMember", "CosetWitness", "HeightCertificate", "HeightPart",
    "InvariantReport", "WeakWidthPart", "WidthCertificate", "WidthPart",
    "distinctness", "height_free", "invariants_free", "max_clique",
    "member_edge", "weak_width_free", "width_free",
    "ExtElement", "ExtensionSpec", "MemberNode", "NodeGraph",
    "ext_conjugate", "ext_distinctness", "ext_inv", "ext_mul",
    "free_spec", "invariants_ext", "node_graph", "twisted_cores",
    "HyperbolicContext", "OracleBucket", "OracleReport",
    "VerificationReport", "ball", "ball_count", "corpus", "oracle",
    "oracle_comparison", "qc_constant", "random_reduced_word",
    "random_subgroup", "verify_bounds",
    "Problem", "ProblemError", "parse_problem", "verify_certificates",
]
