import pytest

import quasirand as q
from quasirand import AnalyzeVerdict


def config(seed: int, k: int = 10, r: int = 5) -> q.AnalyzeConfig:
    return q.AnalyzeConfig(k=k, r=r, seed=seed,
                           budget=q.SampleBudget(samples=60, seed=seed))


@pytest.fixture(scope="module")
def gnp_half():
    return q.generate_gnp(180, 0.5, seed=101)


class TestVerdicts:
    def test_random_graph_is_p_quasi(self, gnp_half):
        rep = q.analyze(gnp_half, q.path3(), 0.5, config(seed=7))
        assert rep.verdict is AnalyzeVerdict.P_QUASI
        assert rep.final_p1 is not None
        assert rep.final_p1.deviation < 0.02
        assert rep.red_pairs == 0

    def test_conjugate_density_graph_is_pbar_quasi(self):
        p_bar = q.conjugate(q.path3(), 0.5).p_bar
        g = q.generate_gnp(180, p_bar, seed=102)
        rep = q.analyze(g, q.path3(), 0.5, config(seed=7))
        assert rep.verdict is AnalyzeVerdict.PBAR_QUASI
        assert rep.blue_pairs == 0

    def test_two_block_is_inconclusive_with_violation(self):
        g = q.two_block_graph(180, 0.5, 0.2, 0.8, seed=103)
        rep = q.analyze(g, q.path3(), 0.2, config(seed=7))
        assert rep.verdict is AnalyzeVerdict.INCONCLUSIVE
        assert any("MIXED_VIOLATION" in d for d in rep.diagnostics)

    def test_seed_stability(self, gnp_half):
        a = q.analyze(gnp_half, q.path3(), 0.5, config(seed=3))
        b = q.analyze(gnp_half, q.path3(), 0.5, config(seed=4))
        assert a.verdict is b.verdict is AnalyzeVerdict.P_QUASI

    def test_mirrored_verdicts(self, gnp_half):
        p_bar = q.conjugate(q.path3(), 0.5).p_bar
        rep = q.analyze(gnp_half, q.path3(), p_bar, config(seed=7))
        assert rep.verdict is AnalyzeVerdict.PBAR_QUASI


class TestSampledCliqueBranch:
    def test_large_order_partition_samples_cliques(self):
        # C(20, 5) exceeds the enumeration cap, so cliques are sampled; the
        # smaller parts carry noisier densities, so the product tolerance is
        # opened up accordingly
        g = q.generate_gnp(280, 0.5, seed=55)
        cfg = q.AnalyzeConfig(k=20, r=5, seed=9, delta_tol=0.8,
                              budget=q.SampleBudget(samples=40, seed=9))
        rep = q.analyze(g, q.path3(), 0.5, cfg)
        assert rep.verdict is AnalyzeVerdict.P_QUASI
        assert rep.kr_examined == cfg.kr_sample


class TestReportContents:
    def test_report_carries_partition_caveat(self, gnp_half):
        rep = q.analyze(gnp_half, q.path3(), 0.5, config(seed=5))
        assert any("regularity-lemma substitute" in note for note in rep.notes)

    def test_soundness_assertion(self, gnp_half):
        rep = q.analyze(gnp_half, q.path3(), 0.5, config(seed=5))
        if rep.verdict is AnalyzeVerdict.P_QUASI:
            assert rep.final_p1.deviation < 0.02

    def test_kr_verdicts_recorded(self, gnp_half):
        rep = q.analyze(gnp_half, q.path3(), 0.5, config(seed=5))
        assert rep.kr_examined > 0
        assert len(rep.kr_verdicts) == rep.kr_examined
        assert all(v is q.Verdict.UNIFORM_P for _, v in rep.kr_verdicts)


class TestPreconditions:
    def test_r_floor(self, gnp_half):
        with pytest.raises(ValueError, match="h \\+ 2"):
            q.analyze(gnp_half, q.path3(), 0.5, q.AnalyzeConfig(k=10, r=4))

    def test_k_at_least_r(self, gnp_half):
        with pytest.raises(ValueError, match="k >= r"):
            q.analyze(gnp_half, q.path3(), 0.5, q.AnalyzeConfig(k=4, r=5))

    def test_graph_size_floor(self):
        g = q.generate_gnp(20, 0.5, seed=1)
        with pytest.raises(ValueError, match="too small"):
            q.analyze(g, q.path3(), 0.5, q.AnalyzeConfig(k=10, r=5))
