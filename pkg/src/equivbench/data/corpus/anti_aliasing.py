def anti_alias(samples, factor):
    out = []
    i = 0
    while i + factor <= len(samples):
        total = 0
        for k in range(factor):
            total = total + samples[i + k]
        out.append(total / factor)
        i = i + factor
    return out
