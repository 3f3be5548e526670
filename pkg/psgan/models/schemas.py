"""Marshmallow schemas for annotation documents, pair manifests and stored configs"""

from marshmallow import EXCLUDE, Schema, fields, post_load, validate

from psgan.config import (
    DbConfig,
    DpConfig,
    GeneratorConfig,
    LossKind,
    LossWeights,
    SppLevels,
    TrainConfig,
)
from psgan.models.scene import BBox, BoxLabel

LABELS = [label.value for label in BoxLabel]
KINDS = [kind.value for kind in LossKind]


class BBoxSchema(Schema):
    x = fields.Int(required=True, validate=validate.Range(min=0))
    y = fields.Int(required=True, validate=validate.Range(min=0))
    w = fields.Int(required=True, validate=validate.Range(min=1))
    h = fields.Int(required=True, validate=validate.Range(min=1))
    label = fields.Str(load_default=BoxLabel.REAL.value, validate=validate.OneOf(LABELS))
    score = fields.Float(load_default=None, allow_none=True)

    @post_load
    def make_box(self, data, **kwargs):
        return BBox(**data)


class SceneEntrySchema(Schema):
    class Meta:
        unknown = EXCLUDE

    image = fields.Str(required=True)
    boxes = fields.List(fields.Nested(BBoxSchema), load_default=list)


class AnnotationDocumentSchema(Schema):
    class Meta:
        unknown = EXCLUDE

    scenes = fields.List(fields.Nested(SceneEntrySchema), required=True)


class PairEntrySchema(Schema):
    index = fields.Int(required=True)
    source_id = fields.Str(load_default='')
    offset = fields.List(fields.Int(), required=True, validate=validate.Length(equal=2))
    z_box = fields.Nested(BBoxSchema, required=True)
    patch_size = fields.Int(required=True, validate=validate.Range(min=1))


class PairManifestSchema(Schema):
    pairs = fields.List(fields.Nested(PairEntrySchema), required=True)


class SppLevelsSchema(Schema):
    levels = fields.List(fields.Int(validate=validate.Range(min=1)), required=True)

    @post_load
    def make(self, data, **kwargs):
        return SppLevels(levels=tuple(data['levels']))


class GeneratorConfigSchema(Schema):
    patch_size = fields.Int(required=True)
    levels = fields.Int(required=True)
    base_channels = fields.Int(required=True)
    use_dropout = fields.Bool(load_default=False)

    @post_load
    def make(self, data, **kwargs):
        return GeneratorConfig(**data)


class DbConfigSchema(Schema):
    input_channels = fields.Int(required=True)
    layer_channels = fields.List(fields.Int(), required=True)

    @post_load
    def make(self, data, **kwargs):
        return DbConfig(input_channels=data['input_channels'], layer_channels=tuple(data['layer_channels']))


class DpConfigSchema(Schema):
    layer_channels = fields.List(fields.Int(), required=True)
    spp = fields.Nested(SppLevelsSchema, required=True)
    spp_enabled = fields.Bool(required=True)
    fixed_size = fields.List(fields.Int(), required=True, validate=validate.Length(equal=2))

    @post_load
    def make(self, data, **kwargs):
        return DpConfig(
            layer_channels=tuple(data['layer_channels']),
            spp=data['spp'],
            spp_enabled=data['spp_enabled'],
            fixed_size=tuple(data['fixed_size']),
        )


class LossWeightsSchema(Schema):
    lambda_l1 = fields.Float(required=True, validate=validate.Range(min=0))
    db_kind = fields.Str(required=True, validate=validate.OneOf(KINDS))
    dp_kind = fields.Str(required=True, validate=validate.OneOf(KINDS))

    @post_load
    def make(self, data, **kwargs):
        return LossWeights(
            lambda_l1=data['lambda_l1'],
            db_kind=LossKind(data['db_kind']),
            dp_kind=LossKind(data['dp_kind']),
        )


class TrainConfigSchema(Schema):
    epochs = fields.Int(required=True)
    batch_size = fields.Int(required=True)
    lr_g = fields.Float(required=True)
    lr_db = fields.Float(required=True)
    lr_dp = fields.Float(required=True)
    beta1 = fields.Float(required=True)
    beta2 = fields.Float(required=True)
    seed = fields.Int(required=True)
    checkpoint_every = fields.Int(required=True)
    dp_enabled = fields.Bool(required=True)
    weights = fields.Nested(LossWeightsSchema, required=True)
    generator = fields.Nested(GeneratorConfigSchema, required=True)
    db = fields.Nested(DbConfigSchema, required=True)
    dp = fields.Nested(DpConfigSchema, required=True)

    @post_load
    def make(self, data, **kwargs):
        return TrainConfig(**data).validate()
