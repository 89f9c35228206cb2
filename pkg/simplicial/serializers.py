from typing import Any, Dict

from django.conf import settings
from rest_framework import serializers

from simplicial.helpers.errors import DomainError, InputError, RigidificationError
from simplicial.helpers.fixtures import category_by_name
from simplicial.helpers.necklace import Flag, HomSimplex, Necklace, NecklaceMap
from simplicial.helpers.sset import FinCategory, FinSSet, nerve
from simplicial.helpers.theorems import HornInHom, SphereInHom


COMMANDS = [
    'hom', 'check-qcat', 'check-cosk', 'fill-horn', 'resolve', 'rigid-delta',
    'iso', 'hc-nerve', 'detect-nerve', 'demo',
]


def validated(serializer: serializers.Serializer, what: str) -> Any:
    """Run ``is_valid`` and turn field errors into an :class:`InputError`."""
    if not serializer.is_valid():
        raise InputError(f"invalid {what}", errors=serializer.errors)
    return serializer.save()


class MorphismSerializer(serializers.Serializer):
    id = serializers.CharField()
    src = serializers.CharField()
    tgt = serializers.CharField()


class FinCategorySerializer(serializers.Serializer):
    """
    ``{objects, morphisms: [{id, src, tgt}], identities: {obj: id}, comp: [[g, f, gf]]}``
    """
    name = serializers.CharField(required=False, allow_blank=True, default='')
    objects = serializers.ListField(child=serializers.CharField(), min_length=1)
    morphisms = MorphismSerializer(many=True)
    identities = serializers.DictField(child=serializers.CharField())
    comp = serializers.ListField(
        child=serializers.ListField(child=serializers.CharField(), min_length=3, max_length=3)
    )

    def validate(self, attrs):
        objects = attrs['objects']
        morphisms = {}
        for m in attrs['morphisms']:
            if m['id'] in morphisms:
                raise serializers.ValidationError({'morphisms': [f"duplicate morphism id {m['id']!r}"]})
            for end in ('src', 'tgt'):
                if m[end] not in objects:
                    raise serializers.ValidationError({'morphisms': [f"{m['id']}.{end} names unknown object {m[end]!r}"]})
            morphisms[m['id']] = (m['src'], m['tgt'])
        missing = [o for o in objects if o not in attrs['identities']]
        if missing:
            raise serializers.ValidationError({'identities': [f"no identity for {missing}"]})
        comp = {}
        for g, f, gf in attrs['comp']:
            for name in (g, f, gf):
                if name not in morphisms:
                    raise serializers.ValidationError({'comp': [f"unknown morphism {name!r}"]})
            comp[(g, f)] = gf
        category = FinCategory(objects, morphisms, dict(attrs['identities']), comp, name=attrs.get('name', ''))
        try:
            category.check()
        except DomainError as e:
            raise serializers.ValidationError({'comp': [e.message]})
        attrs['category'] = category
        return attrs

    def create(self, validated_data) -> FinCategory:
        return validated_data['category']

    def to_representation(self, instance: FinCategory) -> Dict[str, Any]:
        return {'name': instance.name, **instance.as_dict()}


class SimplexRefSerializer(serializers.Serializer):
    word = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False, default=list)
    id = serializers.CharField()

    def validate_word(self, value):
        if any(a <= b for a, b in zip(value, value[1:])):
            raise serializers.ValidationError("degeneracy words are strictly decreasing")
        return value


class SimplexSerializer(serializers.Serializer):
    id = serializers.CharField()
    faces = SimplexRefSerializer(many=True, required=False, default=list)


class FinSSetSerializer(serializers.Serializer):
    """``{dim_cap, simplices: {dim: [{id, faces: [{word, id}]}]}}`` with faces in the order d0..dk."""
    name = serializers.CharField(required=False, allow_blank=True, default='')
    dim_cap = serializers.IntegerField(min_value=0)
    simplices = serializers.DictField(child=serializers.ListField(child=SimplexSerializer()))

    def validate_simplices(self, value):
        for key in value:
            if not str(key).isdigit():
                raise serializers.ValidationError(f"dimension key {key!r} is not a natural number")
        return value

    def validate(self, attrs):
        X = FinSSet(attrs['dim_cap'], name=attrs.get('name', ''))
        try:
            for dim in sorted(attrs['simplices'], key=int):
                for entry in attrs['simplices'][dim]:
                    faces = []
                    for face in entry['faces']:
                        if face['id'] not in X.dims:
                            raise DomainError(f"{entry['id']} names unknown face {face['id']!r}")
                        faces.append(X.ref(face['id'], face['word']))
                    if len(faces) != (int(dim) + 1 if int(dim) else 0):
                        raise DomainError(f"{entry['id']} is listed in dimension {dim} with {len(faces)} faces")
                    X.add_simplex(entry['id'], faces)
            X.validate()
        except DomainError as e:
            raise serializers.ValidationError({'simplices': [e.message]})
        attrs['sset'] = X
        return attrs

    def create(self, validated_data) -> FinSSet:
        return validated_data['sset']

    def to_representation(self, instance: FinSSet) -> Dict[str, Any]:
        return {'name': instance.name, **instance.as_dict()}


class HomSimplexSerializer(serializers.Serializer):
    """A simplex of ℭX(x, y) as a triple; needs ``context['sset']``."""
    beads = serializers.ListField(child=serializers.IntegerField(min_value=1), allow_empty=True)
    images = SimplexRefSerializer(many=True)
    flag = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField(min_value=0)), min_length=1)
    source = serializers.CharField()
    target = serializers.CharField()

    def validate(self, attrs):
        X: FinSSet = self.context['sset']
        try:
            images = []
            for image in attrs['images']:
                if image['id'] not in X.dims:
                    raise DomainError(f"unknown simplex {image['id']!r}")
                images.append(X.ref(image['id'], image['word']))
            m = NecklaceMap(Necklace(tuple(attrs['beads'])), tuple(images), attrs['source'], attrs['target'])
            m.check(X)
            attrs['simplex'] = HomSimplex(m, Flag(tuple(tuple(s) for s in attrs['flag'])))
        except DomainError as e:
            raise serializers.ValidationError({'flag': [e.message]})
        return attrs

    def create(self, validated_data) -> HomSimplex:
        return validated_data['simplex']

    def to_representation(self, instance: HomSimplex) -> Dict[str, Any]:
        described = instance.describe()
        described['images'] = [r.to_dict() for r in instance.map.bead_images]
        return described


class SimplicialSetField(serializers.Field):
    def to_internal_value(self, data):
        serializer = FinSSetSerializer(data=data)
        if not serializer.is_valid():
            raise serializers.ValidationError(serializer.errors)
        return serializer.save()


class CategoryField(serializers.Field):
    """A built-in category name or a category document."""

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                return category_by_name(data)
            except InputError as e:
                raise serializers.ValidationError(e.errors.get('category', [e.message]))
        serializer = FinCategorySerializer(data=data)
        if not serializer.is_valid():
            raise serializers.ValidationError(serializer.errors)
        return serializer.save()


class HornFileSerializer(serializers.Serializer):
    """
    ``{sset | category, x, y, faces: [triple | null]}``; one null slot makes a
    horn, none makes a sphere.
    """
    sset = SimplicialSetField(required=False)
    category = CategoryField(required=False)
    nerve_dim = serializers.IntegerField(min_value=1, required=False, default=4)
    x = serializers.CharField()
    y = serializers.CharField()
    faces = serializers.ListField(child=serializers.JSONField(allow_null=True), min_length=3)

    def validate(self, attrs):
        if ('sset' in attrs) == ('category' in attrs):
            raise serializers.ValidationError({'sset': ["give exactly one of sset and category"]})
        X = attrs['sset'] if 'sset' in attrs else nerve(attrs['category'], attrs['nerve_dim'])
        missing = [i for i, face in enumerate(attrs['faces']) if face is None]
        if len(missing) > 1:
            raise serializers.ValidationError({'faces': ["at most one face slot may be empty"]})
        faces, errors = [], {}
        for i, face in enumerate(attrs['faces']):
            if face is None:
                faces.append(None)
                continue
            serializer = HomSimplexSerializer(data=face, context={'sset': X})
            if serializer.is_valid():
                faces.append(serializer.save())
            else:
                errors[str(i)] = serializer.errors
        if errors:
            raise serializers.ValidationError({'faces': errors})
        n = len(faces) - 1
        try:
            if missing:
                family = HornInHom(X, attrs['x'], attrs['y'], n, missing[0], tuple(faces))
            else:
                family = SphereInHom(X, attrs['x'], attrs['y'], n, tuple(faces))
            family.check()
        except RigidificationError as e:
            raise serializers.ValidationError({'faces': [e.message]})
        attrs['family'] = family
        return attrs

    def create(self, validated_data):
        return validated_data['family']


class RunConfigSerializer(serializers.Serializer):
    command = serializers.ChoiceField(choices=COMMANDS)
    inputs = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    dim_cap = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    size_cap = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    horn_dim = serializers.IntegerField(min_value=2, required=False, allow_null=True)
    budget = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    jobs = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    format = serializers.ChoiceField(choices=['human', 'json'], default='human')
    output = serializers.CharField(required=False, allow_null=True, allow_blank=False)

    def validate(self, attrs):
        defaults = settings.RIGIDIFICATION
        for key in ('dim_cap', 'size_cap', 'budget', 'seed', 'jobs'):
            if attrs.get(key) is None:
                attrs[key] = defaults[key.upper()]
        return attrs

    def create(self, validated_data):
        from simplicial.helpers.runner import RunConfig

        return RunConfig(**validated_data)

