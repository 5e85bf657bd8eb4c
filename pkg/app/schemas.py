"""
Marshmallow schemas for run configuration and command-line documents
"""

from marshmallow import RAISE, Schema, fields, validate

POSITIVE = validate.Range(min=0.0, min_inclusive=False)


class RunConfigSchema(Schema):
    """Validation of layered run settings (flags, key=value file, environment)."""

    class Meta:
        unknown = RAISE

    tol_entropy = fields.Float(required=True, validate=POSITIVE)
    tol_gap = fields.Float(required=True, validate=POSITIVE)
    tol_feas = fields.Float(required=True, validate=POSITIVE)
    k_max = fields.Integer(required=True, strict=False, validate=validate.Range(min=1))
    seed = fields.Integer(required=True, validate=validate.Range(min=0))
    output_format = fields.String(load_default='json', validate=validate.OneOf(['json', 'csv']))
    timestamp = fields.Boolean(load_default=True)


class DocumentSchema(Schema):
    """Common envelope of every JSON document written to standard output."""

    class Meta:
        ordered = True

    schema_version = fields.String(required=True)
    command = fields.String(required=True)
    generated_at = fields.String()


class MaxEntDocumentSchema(DocumentSchema):
    r = fields.List(fields.Float())
    k = fields.Integer()
    q = fields.List(fields.Float())
    entropy = fields.Float()
    primal_value = fields.Float()
    dual_value = fields.Float()
    gap = fields.Float()
    converged = fields.Boolean()
    iterations = fields.Integer()
    x_dual = fields.List(fields.Float())
    residual = fields.Float()


class OrderVerdictSchema(Schema):
    class Meta:
        ordered = True

    k = fields.Integer()
    max_entropy = fields.Float()
    satisfied = fields.Boolean()
    gap = fields.Float()
    converged = fields.Boolean()


class MembershipDocumentSchema(DocumentSchema):
    r = fields.List(fields.Float())
    k_max = fields.Integer()
    per_k = fields.List(fields.Nested(OrderVerdictSchema))
    overall = fields.Boolean()
    theorem_consistent = fields.Boolean()
    first_failure = fields.Integer(allow_none=True)
    is_quantum_state = fields.Boolean()
    note = fields.String()


class ClassicalDocumentSchema(DocumentSchema):
    r = fields.List(fields.Float())
    classical = fields.Boolean()
    l1_norm = fields.Float()
    status = fields.String()
    value = fields.Float(allow_none=True)
    q = fields.List(fields.Float(), allow_none=True)
    kkt_residual = fields.Float()


class CandidateGroupSchema(Schema):
    class Meta:
        ordered = True

    nonzero_count = fields.Integer()
    f = fields.Float()
    count = fields.Integer()
    max_foc_residual = fields.Float()


class FmaxDocumentSchema(DocumentSchema):
    k = fields.Integer()
    method = fields.String(validate=validate.OneOf(['enumerate', 'multistart']))
    max_f = fields.Float()
    bound = fields.Float()
    argmax_class = fields.Integer()
    argmax = fields.List(fields.Float())
    foc_residual = fields.Float()
    pattern_distance = fields.Float()
    n_starts = fields.Integer()
    seed = fields.Integer()
    groups = fields.List(fields.Nested(CandidateGroupSchema))


class SweepDocumentSchema(DocumentSchema):
    k = fields.Integer()
    grid = fields.Float()
    out = fields.String(allow_none=True)
    rows = fields.Integer()
    members = fields.Integer()
    classical = fields.Integer()
    records = fields.List(fields.Dict())


class ProbeDocumentSchema(DocumentSchema):
    alpha = fields.Float()
    order = fields.Integer()
    steps = fields.List(fields.Float())
    right = fields.List(fields.Float())
    left = fields.List(fields.Float())
    right_limit = fields.Float()
    left_limit = fields.Float()
    reliable_steps = fields.Dict(keys=fields.String(), values=fields.Integer())
    noise_floor = fields.Float()
    classification = fields.String(validate=validate.OneOf(['MATCH', 'JUMP', 'DIVERGE', 'INCONCLUSIVE']))
