from pytest_cases import parametrize


class LorentzIndexCases:
    @parametrize("q", [4.0 / 3.0, 1.5, 2.0, 3.0])
    def case_equal_indices_valid(self, q):
        return q, q

    @parametrize("input", [(4.0 / 3.0, 2.0), (2.0, 4.0), (1.5, 1.0)])
    def case_mixed_indices_valid(self, input):
        return input


class InclusionConstantCases:
    @parametrize(
        "input",
        [
            # format: (q, s, C)
            (4.0 / 3.0, 2.0, 0.43096),
            (2.0, 2.0, 0.5),
            (1.5, 1.5, 0.5),
        ],
    )
    def case_constant_valid(self, input):
        return input


class TailCases:
    @parametrize("q", [4.0 / 3.0, 1.5])
    def case_gaussian_member(self, q):
        # format: (kernel, half_width, N, q, verdict)
        return "gauss:sigma=1", 8.0, 4096, q, "member"

    def case_indicator_member(self):
        return "indicator:radius=1", 40.0, 8192, 2.0, "member"

    @parametrize("q", [4.0 / 3.0, 2.0])
    def case_power_nonmember(self, q):
        return "power:q=%r" % q, 8.0, 4096, q, "nonmember_small_t"


class MarginCases:
    @parametrize("kernel", ["gauss:sigma=1", "gauss:sigma=0.25", "indicator:radius=2"])
    @parametrize("indices", [(4.0 / 3.0, 2.0), (1.5, 1.5)])
    def case_margin_valid(self, kernel, indices):
        q, s = indices
        return kernel, q, s, 0.1
