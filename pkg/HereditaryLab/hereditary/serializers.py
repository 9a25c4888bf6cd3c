"""
Serializers for run configuration and reports
"""

from rest_framework import serializers

from .kernel_analysis import Verdict


class RunConfigSerializer(serializers.Serializer):
    """
    Serializer to validate the merged run configuration:
        1. Validate truncation and sample counts are positive
        2. Validate tolerances are positive
        3. Validate grids are nonempty and strictly increasing
    """

    truncation = serializers.IntegerField(min_value=1)
    psd_tol = serializers.FloatField()
    model_tol = serializers.FloatField()
    rank_tol = serializers.FloatField()
    m_grid = serializers.ListField(child=serializers.IntegerField(min_value=1), allow_empty=False)
    n_grid = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=False)
    circle_samples = serializers.IntegerField(min_value=8)
    seed = serializers.IntegerField(min_value=0)
    out = serializers.CharField(required=False, allow_null=True, allow_blank=False)
    csv_dir = serializers.CharField(required=False, allow_null=True, allow_blank=False)

    def validate(self, data):
        for name in ("psd_tol", "model_tol", "rank_tol"):
            if not data[name] > 0:
                raise serializers.ValidationError({name: "Value must be positive."})

        for name in ("m_grid", "n_grid"):
            grid = data[name]
            if any(later <= earlier for earlier, later in zip(grid, grid[1:])):
                raise serializers.ValidationError({name: "Values must be strictly increasing."})

        return data


class ConditionReportSerializer(serializers.Serializer):
    """
    Serializer for ConditionReport
    """

    condition_id = serializers.CharField(source="condition_id.value")
    verdict = serializers.CharField(source="verdict.value")
    witness = serializers.JSONField()
    N_used = serializers.IntegerField()


class MembershipReportSerializer(serializers.Serializer):
    """
    Serializer for MembershipReport
    """

    subject = serializers.CharField()
    in_Cw = serializers.CharField(source="in_Cw.value")
    in_Cw_plus = serializers.CharField(source="in_Cw_plus.value")
    is_part = serializers.BooleanField()
    witness = serializers.JSONField()


class KernelPairSerializer(serializers.Serializer):
    """
    Serializer for KernelPair. Coefficients are included when the
    context asks for them.
    """

    N = serializers.IntegerField()
    inversion_residual = serializers.FloatField()
    violations = serializers.ListField(child=serializers.IntegerField())
    flags = serializers.SerializerMethodField()
    alpha_generator = serializers.SerializerMethodField()
    k_generator = serializers.SerializerMethodField()

    def get_flags(self, pair):
        flags = pair.flags
        return {
            "is_np": flags.is_np,
            "is_wiener_alpha": flags.is_wiener_alpha,
            "is_wiener_k": flags.is_wiener_k,
            "type": flags.type.value,
        }

    def get_alpha_generator(self, pair):
        return pair.alpha.generator.describe()

    def get_k_generator(self, pair):
        return pair.k.generator.describe()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if self.context.get("coefficients"):
            data["alpha"] = [float(c) for c in instance.alpha.coeffs]
            data["k"] = [float(c) for c in instance.k.coeffs]
        return data


class ModelBundleSerializer(serializers.Serializer):
    """
    Serializer for ModelBundle: sizes and residual diagnostics, never the matrices
    """

    dim = serializers.IntegerField(source="T.dim")
    rank = serializers.IntegerField()
    W_rank = serializers.SerializerMethodField()
    M = serializers.IntegerField()
    diagnostics = serializers.JSONField()

    def get_W_rank(self, bundle):
        return int(bundle.W_basis.shape[1])


class TrendFitSerializer(serializers.Serializer):
    trend = serializers.CharField(source="trend.value")
    sup = serializers.FloatField()
    slope = serializers.FloatField()
    exponent = serializers.FloatField()
    r2_log = serializers.FloatField()
    increment_ratio = serializers.FloatField()


class ErgodicProbeSerializer(serializers.Serializer):
    """
    Serializer for ErgodicProbe summaries; the samples go to CSV
    """

    operator = serializers.CharField(source="operator_ref")
    a = serializers.FloatField()
    p = serializers.FloatField()
    along_basis = serializers.BooleanField()
    trend = serializers.CharField(source="trend.value")
    verdict = serializers.SerializerMethodField()
    fits = TrendFitSerializer(many=True)
    n_max = serializers.SerializerMethodField()

    def get_verdict(self, probe):
        return (Verdict.TREND_HOLDS if probe.bounded else Verdict.TREND_FAILS).value

    def get_n_max(self, probe):
        return int(probe.n_grid[-1])
