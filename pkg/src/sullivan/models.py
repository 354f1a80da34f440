"""Minimal Sullivan models of finite targets.

Two builders are provided:

``minimal_model_sc``
    the degree-by-degree construction for simply connected targets.  At each
    degree n it first adds closed generators hitting the cokernel of
    ``H^n(phi)`` and then generators whose differentials kill the kernel of
    ``H^{n+1}(phi)``.

``degree1_stages``
    the stage-by-stage construction of the degree-1 part ``ΛV¹``: stage 0 is
    ``H¹`` of the target with zero differential, and each later stage adds one
    generator per kernel class of ``H²(ΛV¹(k)) → H²(target)``.  For a wedge of
    circles the kernel never dies and the tower keeps growing.

The builders never claim a dimension is infinite; they only report whether a
degree stopped growing before the cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Generator, GeneratorTable, Poly
from .cdga import CdgaMorphism, CdgaPresentation, check_morphism, validate
from .cohomology import cohomology, induced_on_H
from .errors import NotSimplyConnected, SullivanError
from .linalg import complement_basis, nullspace_basis, rank, solve


@dataclass
class ModelBuild:
    model: CdgaPresentation
    phi: CdgaMorphism
    stage_log: list = field(default_factory=list)
    kind: str = "sc"
    cap: int = 0
    stabilized: bool = True

    def stage_log_json(self) -> list[dict]:
        return [{"stage": e["stage"], "added": e["added"], "cumulative_dim": e["cumulative_dim"]}
                for e in self.stage_log]

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.model.table:
            out[g.degree] = out.get(g.degree, 0) + 1
        return out


def _empty_model(max_degree: int) -> CdgaPresentation:
    return CdgaPresentation(GeneratorTable(()), {}, max_degree)


def _kernel_classes(model, phi, target, n):
    """Cocycles of the model spanning ker H^n(phi), with target primitives."""
    hm = cohomology(model, n)
    mat = induced_on_H(phi, n)
    out = []
    for k in nullspace_basis(mat):
        z = hm.class_of(k)
        image = phi.apply(z)
        tbasis = target.basis(n)
        y_vec = solve(target.differential_matrix(n - 1), image.coords(tbasis))
        if y_vec is None:
            raise SullivanError(f"kernel class {z} does not map to a coboundary")
        y = Poly.from_coords(target.table, target.basis(n - 1), y_vec)
        out.append((z, y))
    return out


def _extend(model, phi_images, target, new, max_degree):
    """``new``: list of (Generator, differential Poly over old table, image)."""
    diffs = {g.name: dz for g, dz, _ in new}
    grown = model.extend([g for g, _, _ in new], diffs, max_degree)
    images = dict(phi_images)
    for g, _, y in new:
        images[grown.table.index(g.name)] = y
    return grown, images


def minimal_model_sc(target, max_degree: int) -> ModelBuild:
    N = max_degree
    h0 = cohomology(target, 0)
    if h0.dim != 1:
        raise SullivanError("target is not connected (dim H^0 != 1)")
    if cohomology(target, 1).dim != 0:
        raise NotSimplyConnected(
            "target has H^1 != 0; use degree1_stages for the degree-1 part of the model")
    cap = N + 2
    model = _empty_model(cap)
    images: dict = {}
    log = []
    counter: dict[int, int] = {}

    def fresh(n, stage=None):
        counter[n] = counter.get(n, 0) + 1
        return Generator(f"v{n}_{counter[n]}", n, stage)

    for n in range(2, N + 1):
        phi = CdgaMorphism(model, target, images)
        ht = cohomology(target, n)
        mat = induced_on_H(phi, n)
        image_cols = [mat.column(j) for j in range(mat.cols)]
        new = []
        for idx in complement_basis(image_cols, ht.dim):
            new.append((fresh(n), Poly.zero(model.table), ht.representatives[idx]))
        coker = len(new)
        if new:
            model, images = _extend(model, images, target, new, cap)
            phi = CdgaMorphism(model, target, images)
        new = [(fresh(n), z, y) for z, y in _kernel_classes(model, phi, target, n + 1)]
        if new:
            model, images = _extend(model, images, target, new, cap)
        log.append({
            "stage": n,
            "degree": n,
            "cokernel": coker,
            "kernel": len(new),
            "added": coker + len(new),
            "cumulative_dim": len(model.table),
        })
    phi = CdgaMorphism(model, target, images)
    return ModelBuild(model, phi, log, "sc", N, True)


def degree1_stages(target, max_stage: int) -> ModelBuild:
    if cohomology(target, 0).dim != 1:
        raise SullivanError("target is not connected (dim H^0 != 1)")
    cap = 4
    h1 = cohomology(target, 1)
    model = _empty_model(cap)
    new = [(Generator(f"v0_{i + 1}", 1, 0), Poly.zero(model.table), rep)
           for i, rep in enumerate(h1.representatives)]
    images: dict = {}
    if new:
        model, images = _extend(model, images, target, new, cap)
    log = [{"stage": 0, "added": len(new), "cumulative_dim": len(model.table)}]
    stabilized = False
    for k in range(max_stage + 1):
        phi = CdgaMorphism(model, target, images)
        kernel = _kernel_classes(model, phi, target, 2)
        if not kernel:
            stabilized = True
            break
        if k == max_stage:
            break
        new = [(Generator(f"v{k + 1}_{i + 1}", 1, k + 1), z, y) for i, (z, y) in enumerate(kernel)]
        model, images = _extend(model, images, target, new, cap)
        log.append({"stage": k + 1, "added": len(new), "cumulative_dim": len(model.table)})
    phi = CdgaMorphism(model, target, images)
    return ModelBuild(model, phi, log, "degree1", max_stage, stabilized)


def finite_type_report(build: ModelBuild) -> list[dict]:
    dims = build.dims()
    if build.kind == "degree1":
        return [{"n": 1, "dim": dims.get(1, 0), "stabilized": build.stabilized}]
    return [{"n": n, "dim": dims.get(n, 0), "stabilized": True} for n in range(1, build.cap + 1)]


def verify_build(build: ModelBuild) -> dict:
    """Check the invariants a finished build must satisfy."""
    rep = validate(build.model)
    morph = check_morphism(build.phi)
    top = build.cap if build.kind == "sc" else 1
    iso, injective = True, True
    for n in range(0, top + 1):
        m = induced_on_H(build.phi, n)
        if not (m.rows == m.cols == rank(m)):
            iso = False
    m = induced_on_H(build.phi, top + 1)
    if nullspace_basis(m):
        injective = False
    return {
        "minimal": rep.minimal,
        "d_squared_zero": rep.d_squared_zero,
        "phi_valid": morph.valid,
        "iso_through": top if iso else None,
        "injective_next": injective,
    }
